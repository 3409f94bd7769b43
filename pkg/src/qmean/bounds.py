"""Closed-form bound evaluation and empirical floor sweeps.

Asymptotic lower bounds cannot be asserted at a single n; the sweeps
report the ratio of measured criterion values to the floor shape so the
implied constants can be recorded and tracked instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .combinat import fsum, log_binomial, log_binomial_row
from .errors import (
    ErrorReport,
    avg_expected_error,
    avg_prob_error,
    worst_expected_error,
    worst_prob_error,
)
from .estimators import EstimatorSpec
from .measures import SymmetricMeasure

FLOOR_SHAPES = ("rootn-T", "inv-T")

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    params: dict
    lhs: float
    rhs: float
    holds: bool
    margin: float

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "margin": self.margin,
        }


def const_alg_error_exact(n: int) -> dict:
    """Average |1/2 - k/n| under the uniform-inputs measure, i.e. the
    exact error of the zero-query constant-1/2 algorithm, and its ratio
    to the (2 pi n)^(-1/2) reference scale."""
    if n < 1:
        raise ValueError("n must be positive")
    row = log_binomial_row(n) - n * _LN2
    k = np.arange(n + 1, dtype=np.float64)
    terms = np.exp(row) * np.abs(0.5 - k / n)
    value = fsum(terms)
    return {"value": value, "ratio": value * math.sqrt(2.0 * math.pi * n)}


def _offset_indices(n: int, c: float) -> list:
    shift = c * math.sqrt(n)
    ks = set()
    for center in (n / 2.0 + shift, n / 2.0 - shift):
        ks.add(math.floor(center))
        ks.add(math.ceil(center))
    return sorted(ks)


def central_binomial_floor_check(n: int, c: float) -> BoundCheck:
    """Compare ln C(n, n/2 +- c sqrt(n)) against the closed-form floor
    ln[e^(-6c^2 - 2) 2^n / sqrt(2 pi n)], with both floor and ceil
    roundings of the offset index.  lhs/rhs are on the log scale; margin
    is the worst log gap."""
    if n < 4:
        raise ValueError("n must be at least 4")
    if not 1.0 <= c <= math.sqrt(n) / 6.0 + 1e-12:
        raise ValueError(f"c must lie in [1, sqrt(n)/6], got {c} at n={n}")
    ks = _offset_indices(n, c)
    lhs_logs = [log_binomial(n, k) for k in ks]
    rhs_log = -6.0 * c * c - 2.0 + n * _LN2 - 0.5 * math.log(2.0 * math.pi * n)
    worst = min(lhs_logs)
    return BoundCheck(
        name="central-binomial-floor",
        params={"n": n, "c": c, "ks": ks},
        lhs=worst,
        rhs=rhs_log,
        holds=bool(worst > rhs_log),
        margin=worst - rhs_log,
    )


def central_binomial_floor_grid(n: int) -> list:
    """The c grid {1, 1.25, ...} capped at sqrt(n)/6 (empty below n=36)."""
    out = []
    c = 1.0
    cap = math.sqrt(n) / 6.0 + 1e-12
    while c <= cap:
        out.append(c)
        c += 0.25
    return out


def nayakwu_degree_bound(n: int, k1: int, k2: int) -> float:
    """Degree floor sqrt(n/gap) + sqrt(kappa(n-kappa))/gap for separating
    weight classes k1 > k2, with kappa the class farther from n/2 (ties
    resolved toward k1)."""
    if not 0 <= k2 < k1 <= n:
        raise ValueError(f"need 0 <= k2 < k1 <= n, got k1={k1}, k2={k2}")
    gap = k1 - k2
    half = n / 2.0
    kappa = k1 if abs(half - k1) >= abs(half - k2) else k2
    return math.sqrt(n / gap) + math.sqrt(kappa * (n - kappa)) / gap


@dataclass(frozen=True)
class SweepRow:
    name: str
    n: int
    T: int
    p: Optional[float]
    q: Optional[float]
    measure: Optional[str]
    value: float
    floor: float
    ratio: float


def _floor_value(shape: str, n: int, T: int) -> float:
    if shape == "rootn-T":
        inv_t = math.inf if T == 0 else 1.0 / T
        return min(1.0 / math.sqrt(n), inv_t)
    if shape == "inv-T":
        if T == 0:
            raise ValueError("floor 1/T undefined at T=0")
        return 1.0 / T
    raise ValueError(f"unknown floor shape {shape!r}; use one of {FLOOR_SHAPES}")


_PROB_CRITERIA = ("avg-prob", "worst-prob")
_EXPECTED_CRITERIA = ("avg-expected", "worst-expected")


def floor_sweep(
    est: EstimatorSpec,
    criterion: str,
    n_grid,
    t_grid,
    p: Optional[float] = None,
    q: Optional[float] = None,
    mu_factory=None,
    floor: str = "rootn-T",
) -> list:
    """Evaluate one error criterion over an (n, T) grid and report each
    value against the floor shape.  Probabilistic-criterion sweeps insist
    on T <= n/8 so the small-budget regime the floors describe is what is
    actually being measured."""
    if criterion not in _PROB_CRITERIA + _EXPECTED_CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    n_grid = list(n_grid)
    t_grid = list(t_grid)
    if not n_grid or not t_grid:
        raise ValueError("grids must be nonempty")
    averaged = criterion.startswith("avg-")
    if averaged and mu_factory is None:
        raise ValueError(f"criterion {criterion!r} needs a measure")
    rows = []
    for n in n_grid:
        if criterion in _PROB_CRITERIA:
            bad = [t for t in t_grid if t > n / 8]
            if bad:
                raise ValueError(f"budgets {bad} exceed n/8={n / 8} at n={n}")
        mu = mu_factory(n) if averaged else None
        for t in t_grid:
            rep = _criterion_value(est, criterion, n, t, p, q, mu)
            fl = _floor_value(floor, n, t)
            rows.append(
                SweepRow(
                    name=est.tag,
                    n=n,
                    T=t,
                    p=p,
                    q=q,
                    measure=mu.name if mu is not None else None,
                    value=rep.value,
                    floor=fl,
                    ratio=rep.value / fl,
                )
            )
    return rows


def _criterion_value(est, criterion, n, t, p, q, mu) -> ErrorReport:
    if criterion == "avg-prob":
        return avg_prob_error(est, n, t, p, mu)
    if criterion == "worst-prob":
        return worst_prob_error(est, n, t, p)
    if criterion == "avg-expected":
        return avg_expected_error(est, n, t, q, mu)
    return worst_expected_error(est, n, t, q)


def ratio_band(rows) -> dict:
    ratios = [r.ratio for r in rows]
    return {"min": min(ratios), "max": max(ratios), "span": max(ratios) / min(ratios)}
