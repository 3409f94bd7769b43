"""Exact outcome distributions for every implemented mean estimator, plus
the thresholding distinguisher used by the reduction machinery.

All estimators are symmetric in the input bits, so a distribution is
indexed by the weight class (n, k).  Estimates live on finite grids; the
phase-estimation estimators additionally snap each raw grid value
sin^2(pi j / M) to the nearest achievable mean i/n (the true mean is
always a multiple of 1/n, and the snapped estimator is the one with the
zero-error regime at large M).  A raw value sitting exactly half-way
between two grid points is kept unsnapped; resolving such ties is below
double precision and keeping them preserves the k <-> n-k mirror
symmetry of the distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .combinat import WeightClass, mean

_MERGE_TOL = 1e-12
_MASS_TOL = 1e-9
# atoms below this are rounding dust (an eigenphase one ulp off its grid
# point leaks ~1e-32); genuine kernel masses of interest are far larger
_PROB_FLOOR = 1e-18
# relative half-width (in units of the 1/n spacing) of the keep-raw band
_SNAP_TIE_TOL = 1e-9
# |v*n - round(v*n)| below this treats the estimate as the grid integer
_GRID_EPS = 1e-6

AE_ORACLE_MAX_M = 256


@dataclass(frozen=True)
class OutcomeDistribution:
    """Finite distribution of (estimate, probability) atoms for one input
    class at a fixed query budget.  Atoms are sorted by estimate and
    deduplicated; probabilities sum to 1 within 1e-9."""

    input: WeightClass
    queries: int
    estimates: np.ndarray
    probs: np.ndarray

    @property
    def n(self) -> int:
        return self.input.n

    @property
    def k(self) -> int:
        return self.input.k

    @property
    def true_mean(self) -> float:
        return mean(self.input)

    def total_mass(self) -> float:
        return float(math.fsum(self.probs))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "queries": self.queries,
            "atoms": [[float(e), float(p)] for e, p in zip(self.estimates, self.probs)],
        }


def make_distribution(w: WeightClass, queries: int, estimates, probs) -> OutcomeDistribution:
    """Sort, merge estimates closer than 1e-12, drop atoms whose mass is
    rounding dust, and validate range and total mass."""
    est = np.asarray(estimates, dtype=np.float64)
    pr = np.asarray(probs, dtype=np.float64)
    if est.shape != pr.shape:
        raise ValueError("estimates and probabilities must align")
    order = np.argsort(est, kind="stable")
    est = est[order]
    pr = pr[order]
    merged_e = []
    merged_p = []
    i = 0
    m = len(est)
    while i < m:
        j = i + 1
        while j < m and est[j] - est[i] <= _MERGE_TOL:
            j += 1
        mass = math.fsum(pr[i:j])
        if mass >= _PROB_FLOOR:
            merged_e.append(est[i])
            merged_p.append(mass)
        i = j
    est = np.array(merged_e)
    pr = np.array(merged_p)
    if len(est) == 0:
        raise ValueError("distribution has no mass")
    if est[0] < -1e-12 or est[-1] > 1.0 + 1e-12:
        raise ValueError("estimates must lie in [0, 1]")
    total = math.fsum(pr)
    if abs(total - 1.0) > _MASS_TOL:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    if np.any(pr < 0.0):
        raise ValueError("negative probability atom")
    return OutcomeDistribution(w, queries, est, pr)


def _snap_to_mean_grid(estimates: np.ndarray, n: int) -> np.ndarray:
    t = estimates * n
    nearest = np.rint(t)
    frac = t - np.floor(t)
    tie = np.abs(frac - 0.5) <= _SNAP_TIE_TOL
    return np.where(tie, estimates, nearest / n)


def _phase_grid(m: int) -> np.ndarray:
    j = np.arange(m, dtype=np.float64)
    return np.sin(np.pi * j / m) ** 2


def _eigenphase(a: float) -> float:
    if a == 0.0:
        return 0.0
    if a == 1.0:
        return 0.5
    return math.asin(math.sqrt(a)) / math.pi


def ae_distribution(w: WeightClass, M: int) -> OutcomeDistribution:
    """Amplitude-estimation outcome distribution with an M-point phase
    register, from the closed-form squared-Dirichlet kernel on the two
    mirrored eigenphases.  Query count is recorded as M."""
    if M < 2:
        raise ValueError("M must be at least 2")
    omega = _eigenphase(mean(w))
    probs = _kernels.ae_outcome_probs(omega, M)
    estimates = _snap_to_mean_grid(_phase_grid(M), w.n)
    return make_distribution(w, M, estimates, probs)


def ae_unitary_oracle(w: WeightClass, M: int) -> OutcomeDistribution:
    """Independent validation oracle: simulate the 2M-dimensional phase
    estimation explicitly (2x2 rotation iterate on its invariant plane,
    M-point counter, controlled powers, inverse DFT) and read the exact
    measurement distribution off the final state."""
    if not 2 <= M <= AE_ORACLE_MAX_M:
        raise ValueError(f"M must lie in [2, {AE_ORACLE_MAX_M}]")
    a = mean(w)
    theta = math.asin(math.sqrt(a))
    c2, s2 = math.cos(2 * theta), math.sin(2 * theta)
    grover = np.array([[c2, -s2], [s2, c2]], dtype=np.complex128)
    work = np.array([math.cos(theta), math.sin(theta)], dtype=np.complex128)

    # counter starts in the uniform superposition; row t holds G^t |work>
    state = np.empty((M, 2), dtype=np.complex128)
    amp = 1.0 / math.sqrt(M)
    v = work.copy()
    state[0] = amp * v
    for t in range(1, M):
        v = grover @ v
        state[t] = amp * v

    j = np.arange(M)
    idft = np.exp(-2j * np.pi * np.outer(j, j) / M) / math.sqrt(M)
    out = idft @ state
    probs = np.abs(out[:, 0]) ** 2 + np.abs(out[:, 1]) ** 2
    estimates = _snap_to_mean_grid(_phase_grid(M), w.n)
    return make_distribution(w, M, estimates, probs)


def constant_half(w: WeightClass) -> OutcomeDistribution:
    """The zero-query algorithm that always answers 1/2."""
    return make_distribution(w, 0, np.array([0.5]), np.array([1.0]))


def classical_bernoulli(w: WeightClass, T: int) -> OutcomeDistribution:
    """Classical sampling with replacement: T fair draws of a random bit,
    estimate = fraction of ones seen."""
    if T < 1:
        raise ValueError("T must be at least 1")
    probs = _kernels.binomial_pmf(T, mean(w))
    estimates = np.arange(T + 1, dtype=np.float64) / T
    return make_distribution(w, T, estimates, probs)


def median_of_reps(d: OutcomeDistribution, r: int) -> OutcomeDistribution:
    """Exact distribution of the (floor(r/2)+1)-th order statistic of r
    independent draws from d, via CDF differencing.  Queries scale to
    r times the base budget."""
    if r < 1:
        raise ValueError("r must be at least 1")
    if r == 1:
        return d
    m = r // 2 + 1
    cdf = np.cumsum(d.probs)
    med_cdf = _kernels.median_transform(cdf, r, m)
    probs = np.diff(med_cdf, prepend=0.0)
    probs = np.maximum(probs, 0.0)
    return make_distribution(d.input, r * d.queries, d.estimates.copy(), probs)


@dataclass(frozen=True)
class PartialFnSpec:
    """Two-class partial function: 1 on weight k1, 0 on weight k2."""

    n: int
    k1: int
    k2: int

    def __post_init__(self):
        if not 0 <= self.k2 < self.k1 <= self.n:
            raise ValueError(f"need 0 <= k2 < k1 <= n, got k1={self.k1}, k2={self.k2}, n={self.n}")


@dataclass(frozen=True)
class DistinguisherReport:
    accept1: float
    accept2: float
    fail1: float
    fail2: float


def acceptance_mass(d: OutcomeDistribution, k1: int, threshold: float) -> float:
    """Probability that the thresholding rule |k1 - n*estimate| <= threshold
    accepts.  The boundary is inclusive so that a quantile guarantee at
    exactly the threshold transfers to the acceptance probability; atoms
    on the 1/n grid are compared in integer space so boundary cases are
    classified exactly."""
    t = d.estimates * d.n
    nearest = np.rint(t)
    on_grid = np.abs(t - nearest) <= _GRID_EPS
    dev = np.where(on_grid, np.abs(k1 - nearest), np.abs(k1 - t))
    inside = dev <= threshold
    if not np.any(inside):
        return 0.0
    return float(math.fsum(d.probs[inside]))


def distinguisher(
    dk1: OutcomeDistribution,
    dk2: OutcomeDistribution,
    spec: PartialFnSpec,
    threshold: float,
) -> DistinguisherReport:
    """Run the threshold acceptance rule against the two classes of a
    partial function and report per-class accept and failure rates."""
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    if dk1.n != dk2.n or dk1.n != spec.n:
        raise ValueError("distributions and spec disagree on n")
    if dk1.queries != dk2.queries:
        raise ValueError("distributions have different query budgets")
    if dk1.k != spec.k1 or dk2.k != spec.k2:
        raise ValueError("distributions do not match the spec classes")
    accept1 = acceptance_mass(dk1, spec.k1, threshold)
    accept2 = acceptance_mass(dk2, spec.k1, threshold)
    return DistinguisherReport(
        accept1=accept1,
        accept2=accept2,
        fail1=1.0 - accept1,
        fail2=accept2,
    )


def total_variation(d1: OutcomeDistribution, d2: OutcomeDistribution) -> float:
    """TV distance on the merged support (atoms aligned within 1e-12)."""
    vals = np.concatenate([d1.estimates, d2.estimates])
    signed = np.concatenate([d1.probs, -d2.probs])
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    signed = signed[order]
    acc = 0.0
    i = 0
    m = len(vals)
    while i < m:
        j = i + 1
        while j < m and vals[j] - vals[i] <= _MERGE_TOL:
            j += 1
        acc += abs(math.fsum(signed[i:j]))
        i = j
    return 0.5 * acc


# --- estimator selectors -----------------------------------------------

ESTIMATOR_KINDS = ("ae", "ae-oracle", "median-reps", "constant", "bernoulli")


@dataclass(frozen=True)
class EstimatorSpec:
    """Named estimator family; budget is M for the phase-estimation
    family and T for classical sampling, ignored by the constant."""

    kind: str
    reps: int = 1

    def __post_init__(self):
        if self.kind not in ESTIMATOR_KINDS:
            raise ValueError(f"unknown estimator {self.kind!r}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.kind != "median-reps" and self.reps != 1:
            raise ValueError("reps only applies to median-reps")

    @property
    def tag(self) -> str:
        if self.kind == "median-reps":
            return f"median-reps-r{self.reps}"
        return self.kind

    def distribution(self, w: WeightClass, budget: int) -> OutcomeDistribution:
        if self.kind == "ae":
            return ae_distribution(w, budget)
        if self.kind == "ae-oracle":
            return ae_unitary_oracle(w, budget)
        if self.kind == "median-reps":
            return median_of_reps(ae_distribution(w, budget), self.reps)
        if self.kind == "bernoulli":
            return classical_bernoulli(w, budget)
        return constant_half(w)

    def queries(self, budget: int) -> int:
        if self.kind == "constant":
            return 0
        if self.kind == "median-reps":
            return self.reps * budget
        return budget
