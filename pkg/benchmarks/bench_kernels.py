"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run: python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from querymind import _kernels
from querymind.codespace import CodeSpace, FeedbackMode, Repeats, VariantConfig


def _time(fn, *args, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(config: VariantConfig, label: str) -> None:
    space = CodeSpace.enumerate(config)
    codes = space.codes
    bw = config.feedback is FeedbackMode.BLACK_WHITE
    print(f"\n{label}: {space.size} codes, n={config.n}, k={config.k}, bw={bw}")

    rows = [("feedback_ids numpy", _kernels.feedback_ids_numpy, (codes, codes, config.k, bw))]
    if _kernels.USING_NUMBA:
        rows.append(("feedback_ids numba", _kernels.feedback_ids_numba, (codes, codes, config.k, bw)))
    fids = None
    for name, fn, args in rows:
        secs, out = _time(fn, *args)
        if fids is None:
            fids = out
        else:
            assert np.array_equal(fids, out), f"{name} disagrees"
        print(f"  {name:24s} {secs * 1e3:9.1f} ms")

    n_fids = space.n_fids
    rows = [("max_bucket_sizes numpy", _kernels.max_bucket_sizes_numpy, (fids, n_fids))]
    if _kernels.USING_NUMBA:
        rows.append(("max_bucket_sizes numba", _kernels.max_bucket_sizes_numba, (fids, n_fids)))
    ref = None
    for name, fn, args in rows:
        secs, out = _time(fn, *args)
        if ref is None:
            ref = out
        else:
            assert np.array_equal(ref, out), f"{name} disagrees"
        print(f"  {name:24s} {secs * 1e3:9.1f} ms")


def main() -> None:
    print(f"numba active: {_kernels.USING_NUMBA}")
    bench(VariantConfig(4, 6), "classic Mastermind (4,6) black+white")
    bench(
        VariantConfig(
            7, 7, feedback=FeedbackMode.BLACK_ONLY, repeats=Repeats.FORBIDDEN
        ),
        "permutation game n=7 black-only",
    )


if __name__ == "__main__":
    main()
