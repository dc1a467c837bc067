import itertools

import pytest

from querymind.codespace import FeedbackMode, Mode, Repeats, VariantConfig


def perm_config(n: int, mode: Mode = Mode.ADAPTIVE) -> VariantConfig:
    """Black-peg, no-repeats, k = n: the permutation game."""
    return VariantConfig(
        n=n, k=n, feedback=FeedbackMode.BLACK_ONLY, repeats=Repeats.FORBIDDEN, mode=mode
    )


def black(q, h) -> int:
    return sum(1 for a, b in zip(q, h) if a == b)


def white_bruteforce(q, h) -> int:
    """Oracle: best black count over all rearrangements of q, minus black."""
    best = max(black(sigma, h) for sigma in set(itertools.permutations(q)))
    return best - black(q, h)


@pytest.fixture(scope="session")
def spaces():
    """Session cache of enumerated code spaces keyed by config."""
    from querymind.codespace import CodeSpace

    cache = {}

    def get(config):
        if config not in cache:
            cache[config] = CodeSpace.enumerate(config)
        return cache[config]

    return get
