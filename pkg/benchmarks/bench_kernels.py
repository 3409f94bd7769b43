#!/usr/bin/env python3
"""Time the hot kernels on sweep-shaped workloads, numba path vs the pure
numpy fallback.

The workload mirrors the heaviest acceptance sweep: one full weight-class
pass (n = 4096) at a 512-point query budget for each kernel.  Run with
QMEAN_DISABLE_NUMBA unset; the script reaches the jitted variants directly
so both paths are timed in one process.
"""

import math
import time

import numpy as np

from qmean import _kernels

N_CLASSES = 4097
M = 512


def timeit(fn, args_iter, repeats=3):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for args in args_iter:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    omegas = [(math.asin(math.sqrt(k / (N_CLASSES - 1))) / math.pi, M) for k in range(N_CLASSES)]
    pmf_args = [(M, k / (N_CLASSES - 1)) for k in range(N_CLASSES)]
    devs = [np.abs(np.sin(np.pi * np.arange(M) / M) ** 2 - k / (N_CLASSES - 1)) for k in range(N_CLASSES)]
    probs = [rng.dirichlet(np.ones(M)) for _ in range(64)]
    q_args = [(devs[i], probs[i % 64], 0.81) for i in range(N_CLASSES)]
    l_args = [(devs[i], probs[i % 64], 1.0) for i in range(N_CLASSES)]
    cdfs = [np.cumsum(probs[i % 64]) for i in range(N_CLASSES)]
    m_args = [(cdfs[i], 4, 3) for i in range(N_CLASSES)]

    pairs = [
        ("ae_outcome_probs", _kernels._ae_outcome_probs_nb, _kernels.ae_outcome_probs_numpy, omegas),
        ("binomial_pmf", _kernels._binomial_pmf_nb, _kernels.binomial_pmf_numpy, pmf_args),
        ("quantile_from_deviations", _kernels._quantile_from_deviations_nb,
         _kernels.quantile_from_deviations_numpy, q_args),
        ("lq_moment", _kernels._lq_moment_nb, _kernels.lq_moment_numpy, l_args),
        ("median_transform", _kernels._median_transform_nb, _kernels.median_transform_numpy, m_args),
    ]

    if not _kernels.USE_NUMBA:
        print("numba path inactive (QMEAN_DISABLE_NUMBA set or numba missing);")
        print("timing the numpy fallback only\n")

    print(f"workload: {N_CLASSES} weight classes, budget {M}\n")
    header = f"{'kernel':28s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, nb, ref, args in pairs:
        t_np = timeit(ref, args)
        if _kernels.USE_NUMBA:
            nb(*args[0])  # compile outside the timed region
            t_nb = timeit(nb, args)
            print(f"{name:28s} {t_np:10.3f} {t_nb:10.3f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:28s} {t_np:10.3f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
