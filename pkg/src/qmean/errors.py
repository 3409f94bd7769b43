"""Error functionals evaluated exactly on outcome distributions, plus the
count-scaled variants and the quantile<->moment conversion bridge."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import _kernels
from .combinat import WeightClass, fsum, mean
from .estimators import EstimatorSpec, OutcomeDistribution
from .measures import SymmetricMeasure

CRITERIA = (
    "quantile",
    "worst-prob",
    "avg-prob",
    "expected-Lq",
    "worst-expected",
    "avg-expected",
)


@dataclass(frozen=True)
class ErrorReport:
    criterion: str
    n: int
    T: int
    p: Optional[float]
    q: Optional[float]
    measure: Optional[str]
    value: float
    scaled: bool = False

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "n": self.n,
            "T": self.T,
            "p": self.p,
            "q": self.q,
            "measure": self.measure,
            "value": self.value,
        }


def quantile_error(d: OutcomeDistribution, a: float, p: float) -> float:
    """Smallest attained deviation gamma with P(|a - estimate| <= gamma)
    at least p.  The support is finite so the infimum is one of the
    |a - estimate| values."""
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    devs = np.abs(a - d.estimates)
    return _kernels.quantile_from_deviations(devs, d.probs, p)


def expected_error(d: OutcomeDistribution, a: float, q: float) -> float:
    """Lq moment of |a - estimate| over the outcome distribution."""
    if q < 1.0:
        raise ValueError(f"q must be at least 1, got {q}")
    devs = np.abs(a - d.estimates)
    return _kernels.lq_moment(devs, d.probs, q)


def _check_theorem_p(p: float) -> None:
    if not 0.5 < p <= 1.0:
        raise ValueError(f"p must lie in (1/2, 1], got {p}")


def _class_dists(est: EstimatorSpec, n: int, budget: int):
    for k in range(n + 1):
        yield k, est.distribution(WeightClass(n, k), budget)


def worst_prob_error(est: EstimatorSpec, n: int, T: int, p: float) -> ErrorReport:
    _check_theorem_p(p)
    worst = 0.0
    for k, d in _class_dists(est, n, T):
        worst = max(worst, quantile_error(d, mean(d.input), p))
    return ErrorReport("worst-prob", n, est.queries(T), p, None, None, worst)


def avg_prob_error(
    est: EstimatorSpec, n: int, T: int, p: float, mu: SymmetricMeasure
) -> ErrorReport:
    _check_theorem_p(p)
    if mu.n != n:
        raise ValueError(f"measure is over n={mu.n}, expected {n}")
    terms = [
        mu.class_prob[k] * quantile_error(d, mean(d.input), p)
        for k, d in _class_dists(est, n, T)
    ]
    return ErrorReport("avg-prob", n, est.queries(T), p, None, mu.name, fsum(terms))


def worst_expected_error(est: EstimatorSpec, n: int, T: int, q: float) -> ErrorReport:
    if q < 1.0:
        raise ValueError(f"q must be at least 1, got {q}")
    worst = 0.0
    for k, d in _class_dists(est, n, T):
        worst = max(worst, expected_error(d, mean(d.input), q))
    return ErrorReport("worst-expected", n, est.queries(T), None, q, None, worst)


def avg_expected_error(
    est: EstimatorSpec, n: int, T: int, q: float, mu: SymmetricMeasure
) -> ErrorReport:
    if q < 1.0:
        raise ValueError(f"q must be at least 1, got {q}")
    if mu.n != n:
        raise ValueError(f"measure is over n={mu.n}, expected {n}")
    terms = [
        mu.class_prob[k] * expected_error(d, mean(d.input), q)
        for k, d in _class_dists(est, n, T)
    ]
    return ErrorReport("avg-expected", n, est.queries(T), None, q, mu.name, fsum(terms))


def count_scaled(r: ErrorReport) -> ErrorReport:
    """Rescale a mean-error report to the count scale (multiply by n);
    turns accuracy eps into count accuracy Delta = n*eps."""
    if r.scaled:
        raise ValueError("report is already count-scaled")
    return replace(r, criterion=f"count-{r.criterion}", value=r.n * r.value, scaled=True)


@dataclass(frozen=True)
class MarkovBridge:
    delta: float
    p: float


def markov_quantile_bound(eps: float, q: float, a: float) -> MarkovBridge:
    """Convert an Lq-moment bound eps into a quantile bound: deviations
    reach a*eps with probability at most a^-q, so the p = 1 - a^-q
    quantile is at most a*eps.  Requires a > 2 so p > 1/2 at q = 1."""
    if a <= 2.0:
        raise ValueError(f"a must exceed 2, got {a}")
    if q < 1.0:
        raise ValueError(f"q must be at least 1, got {q}")
    if eps < 0.0:
        raise ValueError("eps must be nonnegative")
    return MarkovBridge(delta=a * eps, p=1.0 - a ** (-q))
