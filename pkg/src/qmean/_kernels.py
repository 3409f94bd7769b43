"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The jitted path is taken whenever numba imports cleanly; set
QMEAN_DISABLE_NUMBA=1 to force the numpy implementations (same results
to ~1e-15, no compilation latency).  Both variants stay importable so
benchmarks/bench_kernels.py can time them side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np
from scipy.special import betainc, gammaln

__all__ = [
    "USE_NUMBA",
    "ae_outcome_probs",
    "binomial_pmf",
    "quantile_from_deviations",
    "lq_moment",
    "median_transform",
    "warmup",
]


def _numba_disabled() -> bool:
    return os.environ.get("QMEAN_DISABLE_NUMBA", "0").lower() not in ("", "0", "false")


try:
    if _numba_disabled():
        raise ImportError("disabled via QMEAN_DISABLE_NUMBA")
    from numba import njit

    USE_NUMBA = True
except ImportError:
    USE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# Cumulative probability is compared against p with this slack so that
# accumulated rounding in the CDF never pushes a mathematically attained
# quantile to the next support point.
_P_SLACK = 1e-12


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def ae_outcome_probs_numpy(omega: float, m: int) -> np.ndarray:
    """Outcome probabilities of size-m phase estimation on an eigenphase
    pair {omega, -omega}, each carrying half the initial amplitude.

    Entries follow sin^2(m pi x) / (m sin(pi x))^2 evaluated at
    x = (j -+ m*omega)/m, with the exact one-hot limit when the phase
    lands on the measurement grid.
    """
    j = np.arange(m, dtype=np.float64)
    if omega == 0.0 or omega == 0.5:
        return _squared_dirichlet_numpy(j - m * omega, m)
    return 0.5 * (
        _squared_dirichlet_numpy(j - m * omega, m)
        + _squared_dirichlet_numpy(j + m * omega, m)
    )


def _squared_dirichlet_numpy(delta: np.ndarray, m: int) -> np.ndarray:
    # reduce mod m, then split off the integer part: sin^2(pi*delta) equals
    # sin^2(pi*frac) and the small reduced arguments keep pi-multiplication
    # error out of the near-zero sines
    dr = delta - m * np.floor(delta / m + 0.5)
    frac = dr - np.rint(dr)
    on_grid = dr == 0.0
    on_int = frac == 0.0
    safe_f = np.where(on_int, 0.25, frac)
    safe_d = np.where(on_int, 0.25, dr)
    num = np.sin(np.pi * safe_f)
    den = m * np.sin(np.pi * safe_d / m)
    out = (num * num) / (den * den)
    out[on_int] = 0.0
    out[on_grid] = 1.0
    return out


def binomial_pmf_numpy(t: int, a: float) -> np.ndarray:
    if a == 0.0:
        out = np.zeros(t + 1)
        out[0] = 1.0
        return out
    if a == 1.0:
        out = np.zeros(t + 1)
        out[t] = 1.0
        return out
    i = np.arange(t + 1, dtype=np.float64)
    logc = gammaln(t + 1.0) - gammaln(i + 1.0) - gammaln(t - i + 1.0)
    return np.exp(logc + i * math.log(a) + (t - i) * math.log1p(-a))


def quantile_from_deviations_numpy(devs: np.ndarray, probs: np.ndarray, p: float) -> float:
    order = np.argsort(devs)
    cum = np.cumsum(probs[order])
    hit = np.searchsorted(cum, p - _P_SLACK, side="left")
    if hit >= len(order):
        hit = len(order) - 1
    return float(devs[order[hit]])


def lq_moment_numpy(devs: np.ndarray, probs: np.ndarray, q: float) -> float:
    if q == 1.0:
        return float(math.fsum(probs * devs))
    s = math.fsum(probs * devs**q)
    return float(s ** (1.0 / q))


def median_transform_numpy(cdf: np.ndarray, r: int, m: int) -> np.ndarray:
    """P(m-th smallest of r independent draws <= v) for every support
    point v, given the single-draw CDF evaluated at those points.  The
    CDF is clipped into [0, 1]: cumulative sums overshoot by an ulp."""
    return betainc(m, r - m + 1, np.clip(cdf, 0.0, 1.0))


# ---------------------------------------------------------------------------
# numba twins (explicit loops; compiled only when the fast path is active)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _squared_dirichlet_nb(delta: float, m: int) -> float:
    dr = delta - m * math.floor(delta / m + 0.5)
    if dr == 0.0:
        return 1.0
    frac = dr - math.floor(dr + 0.5)
    if frac == 0.0:
        return 0.0
    num = math.sin(math.pi * frac)
    den = m * math.sin(math.pi * dr / m)
    return (num * num) / (den * den)


@njit(cache=True)
def _ae_outcome_probs_nb(omega: float, m: int) -> np.ndarray:
    out = np.empty(m, dtype=np.float64)
    mo = m * omega
    if omega == 0.0 or omega == 0.5:
        for j in range(m):
            out[j] = _squared_dirichlet_nb(j - mo, m)
    else:
        for j in range(m):
            out[j] = 0.5 * (
                _squared_dirichlet_nb(j - mo, m) + _squared_dirichlet_nb(j + mo, m)
            )
    return out


@njit(cache=True)
def _binomial_pmf_nb(t: int, a: float) -> np.ndarray:
    out = np.zeros(t + 1, dtype=np.float64)
    if a == 0.0:
        out[0] = 1.0
        return out
    if a == 1.0:
        out[t] = 1.0
        return out
    la = math.log(a)
    l1a = math.log1p(-a)
    lt = math.lgamma(t + 1.0)
    for i in range(t + 1):
        logc = lt - math.lgamma(i + 1.0) - math.lgamma(t - i + 1.0)
        out[i] = math.exp(logc + i * la + (t - i) * l1a)
    return out


@njit(cache=True)
def _quantile_from_deviations_nb(devs: np.ndarray, probs: np.ndarray, p: float) -> float:
    order = np.argsort(devs)
    target = p - _P_SLACK
    acc = 0.0
    comp = 0.0
    for idx in order:
        x = probs[idx]
        t = acc + x
        if abs(acc) >= abs(x):
            comp += (acc - t) + x
        else:
            comp += (x - t) + acc
        acc = t
        if acc + comp >= target:
            return devs[idx]
    return devs[order[len(order) - 1]]


@njit(cache=True)
def _lq_moment_nb(devs: np.ndarray, probs: np.ndarray, q: float) -> float:
    acc = 0.0
    comp = 0.0
    for i in range(len(devs)):
        x = probs[i] * devs[i] ** q if q != 1.0 else probs[i] * devs[i]
        t = acc + x
        if abs(acc) >= abs(x):
            comp += (acc - t) + x
        else:
            comp += (x - t) + acc
        acc = t
    s = acc + comp
    if q == 1.0:
        return s
    return s ** (1.0 / q)


@njit(cache=True)
def _median_transform_nb(cdf: np.ndarray, r: int, m: int) -> np.ndarray:
    out = np.empty(len(cdf), dtype=np.float64)
    for v in range(len(cdf)):
        f = cdf[v]
        if f <= 0.0:
            out[v] = 0.0
            continue
        if f >= 1.0:
            out[v] = 1.0
            continue
        s = 0.0
        c = 1.0
        for i in range(1, m):
            c = c * (r - i + 1) / i
        # c = C(r, m-1) entering the loop; update multiplicatively
        for i in range(m, r + 1):
            c = c * (r - i + 1) / i
            s += c * f**i * (1.0 - f) ** (r - i)
        out[v] = s
    return out


if USE_NUMBA:
    ae_outcome_probs = _ae_outcome_probs_nb
    binomial_pmf = _binomial_pmf_nb
    quantile_from_deviations = _quantile_from_deviations_nb
    lq_moment = _lq_moment_nb
    median_transform = _median_transform_nb
else:
    ae_outcome_probs = ae_outcome_probs_numpy
    binomial_pmf = binomial_pmf_numpy
    quantile_from_deviations = quantile_from_deviations_numpy
    lq_moment = lq_moment_numpy
    median_transform = median_transform_numpy


def warmup() -> None:
    """Trigger JIT compilation so timed sections measure algorithm cost."""
    d = ae_outcome_probs(0.3, 8)
    binomial_pmf(4, 0.25)
    quantile_from_deviations(np.abs(np.linspace(0, 1, 8) - 0.3), d, 0.75)
    lq_moment(d, d, 2.0)
    median_transform(np.cumsum(d), 3, 2)
