"""Symmetric probability measures on n-bit inputs.

Only permutation-invariant measures are represented: a measure is a
probability vector over the Hamming-weight classes 0..n, and the induced
per-string probability inside class k is classProb[k] / C(n, k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combinat import WeightClass, binomial_row_exact, class_count, fsum, ldexp_ratio

_MASS_TOL = 1e-12
# hand-edited measure files are renormalized when off by at most this
_FILE_MASS_SLOP = 0.01


@dataclass(frozen=True)
class SymmetricMeasure:
    n: int
    class_prob: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        probs = np.asarray(self.class_prob, dtype=np.float64)
        object.__setattr__(self, "class_prob", probs)
        if self.n < 1:
            raise ValueError("n must be positive")
        if probs.shape != (self.n + 1,):
            raise ValueError(f"need {self.n + 1} class weights, got {probs.shape}")
        if np.any(probs < 0.0):
            raise ValueError("class probabilities must be nonnegative")
        total = fsum(probs)
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"class probabilities sum to {total!r}, not 1")

    def per_string(self, k: int) -> float:
        """Probability of one particular string of weight k (float; may
        underflow to 0 for huge classes)."""
        return float(self.class_prob[k]) / class_count(WeightClass(self.n, k))


@dataclass(frozen=True)
class IndexWindow:
    """Consecutive weight indices {lo, ..., hi} used by the measure-class
    condition; records how balanced (k(n-k)/n^2) its worst index is."""

    n: int
    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi <= self.n:
            raise ValueError(f"window [{self.lo}, {self.hi}] invalid for n={self.n}")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def balancedness(self) -> float:
        # k(n-k) is concave in k, so the minimum sits at an endpoint
        n = self.n
        return min(self.lo * (n - self.lo), self.hi * (n - self.hi)) / (n * n)


@dataclass(frozen=True)
class MeasureClassReport:
    holds: bool
    worst_ratio: float
    balancedness: float


def uniform_inputs(n: int) -> SymmetricMeasure:
    """All 2^n strings equally likely: classProb[k] = C(n,k) 2^-n.

    Built from exact big-int binomials so the unit-mass invariant holds
    to the last bit even for n in the thousands.
    """
    if n < 1:
        raise ValueError("n must be positive")
    counts = binomial_row_exact(n)
    probs = np.array([ldexp_ratio(c, -n) for c in counts])
    return SymmetricMeasure(n, probs, name="uniform-inputs")


def uniform_means(n: int) -> SymmetricMeasure:
    """All n+1 values of the mean equally likely: classProb[k] = 1/(n+1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return SymmetricMeasure(n, np.full(n + 1, 1.0 / (n + 1)), name="uniform-means")


def measure_class_condition(
    mu: SymmetricMeasure, window: IndexWindow, c: float
) -> MeasureClassReport:
    """Check the per-class lower bound classProb[k] >= c/|I| on a window.

    Equivalent to requiring each string of weight k in the window to carry
    probability at least c / (|I| C(n,k)).  worst_ratio reports how close
    the tightest class comes to the bound (values >= 1 mean it holds).
    """
    if window.n != mu.n:
        raise ValueError(f"window n={window.n} does not match measure n={mu.n}")
    if c <= 0.0:
        raise ValueError("c must be positive")
    block = mu.class_prob[window.lo : window.hi + 1]
    bound = c / window.size
    worst = float(block.min())
    return MeasureClassReport(
        holds=bool(worst >= bound),
        worst_ratio=worst * window.size / c,
        balancedness=window.balancedness(),
    )


def parse_measure_text(text: str, name: str = "custom") -> SymmetricMeasure:
    """Measure file format: first value is n, then n+1 class weights, one
    per line; '#' starts a comment.  Weights off unit mass by at most 1%
    are renormalized, anything worse is rejected."""
    values = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        values.append(line)
    if not values:
        raise ValueError("empty measure file")
    try:
        n = int(values[0])
    except ValueError:
        raise ValueError(f"first entry must be the integer n, got {values[0]!r}")
    if n < 1:
        raise ValueError("n must be positive")
    if len(values) != n + 2:
        raise ValueError(f"expected {n + 1} class weights for n={n}, got {len(values) - 1}")
    probs = np.array([float(v) for v in values[1:]], dtype=np.float64)
    if np.any(probs < 0.0):
        raise ValueError("class weights must be nonnegative")
    total = fsum(probs)
    if abs(total - 1.0) > _FILE_MASS_SLOP:
        raise ValueError(f"class weights sum to {total!r}; more than 1% from unit mass")
    return SymmetricMeasure(n, probs / total, name=name)


def load_measure(path) -> SymmetricMeasure:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_measure_text(text, name=f"file:{path}")


def dump_measure_text(mu: SymmetricMeasure) -> str:
    lines = [f"# measure {mu.name}", str(mu.n)]
    lines.extend(f"{p:.17g}" for p in mu.class_prob)
    return "\n".join(lines) + "\n"
