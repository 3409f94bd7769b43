"""Symmetrization and degree machinery for acceptance probabilities.

Acceptance probabilities of query algorithms are low-degree polynomials
in the input bits; averaged over permutations they become univariate
polynomials in the Hamming weight.  This module extracts the minimal
degree of such value tables and provides a linear-programming oracle for
the smallest degree that separates two weight classes within error c,
under the unit-range constraint that probabilities obey.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .combinat import WeightClass
from .estimators import EstimatorSpec, PartialFnSpec, acceptance_mass
from .simplex import feasible_exact, feasible_float

SYMMETRIZE_N_MAX = 20
LP_N_MAX = 80
EXACT_LP_N_MAX = 40
DEFAULT_DEGREE_TOL = 1e-8


@dataclass(frozen=True)
class UnivariatePolyValues:
    """Values of a univariate polynomial at the integer nodes 0..n."""

    n: int
    values: np.ndarray
    _degree_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.n + 1,):
            raise ValueError(f"need {self.n + 1} node values, got {vals.shape}")

    def min_degree(self, tol: float = DEFAULT_DEGREE_TOL) -> int:
        if tol not in self._degree_cache:
            self._degree_cache[tol] = minimal_degree(self, tol)
        return self._degree_cache[tol]


def symmetrize(truth_table, n: int) -> UnivariatePolyValues:
    """Average a function on n-bit inputs over each Hamming-weight class.

    The result is the value table of the symmetrized function, which for
    polynomial inputs is a univariate polynomial of no larger degree.
    """
    if n > SYMMETRIZE_N_MAX:
        raise ValueError(f"truth-table path capped at n={SYMMETRIZE_N_MAX}")
    table = np.asarray(truth_table, dtype=np.float64)
    if table.shape != (1 << n,):
        raise ValueError(f"table must have 2^{n} entries, got {table.shape}")
    weights = _popcounts(1 << n)
    values = np.empty(n + 1)
    for k in range(n + 1):
        cls = table[weights == k]
        values[k] = math.fsum(cls) / math.comb(n, k)
    return UnivariatePolyValues(n, values)


def _popcounts(size: int) -> np.ndarray:
    v = np.arange(size, dtype=np.uint32)
    v = v - ((v >> 1) & 0x55555555)
    v = (v & 0x33333333) + ((v >> 2) & 0x33333333)
    v = (v + (v >> 4)) & 0x0F0F0F0F
    return ((v * 0x01010101) >> 24).astype(np.intp)


def minimal_degree(v: UnivariatePolyValues, tol: float) -> int:
    """Smallest d whose order-(d+1) forward differences all vanish within
    tol * max|values|; the interpolant through the nodes then has degree
    at most d."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    vals = v.values
    scale = float(np.max(np.abs(vals)))
    if scale == 0.0:
        return 0
    cur = np.diff(vals)
    for d in range(v.n + 1):
        if cur.size == 0 or float(np.max(np.abs(cur))) <= tol * scale:
            return d
        cur = np.diff(cur)
    return v.n


def _chebyshev_node_table(n: int, dmax: int):
    """columns[i][k] = T_i(2k/n - 1) as exact Fractions, i <= dmax."""
    xs = [Fraction(2 * k, n) - 1 for k in range(n + 1)]
    cols = [[Fraction(1)] * (n + 1)]
    if dmax >= 1:
        cols.append(xs[:])
    for i in range(2, dmax + 1):
        cols.append([2 * x * a - b for x, a, b in zip(xs, cols[i - 1], cols[i - 2])])
    return cols


def _lp_constraints(spec: PartialFnSpec, c: Fraction, cols, d: int):
    """A y <= b for: 0 <= P(k) <= 1 on every node, P(k1) >= 1-c, P(k2) <= c,
    with P = sum_i y_i T_i in the shifted Chebyshev basis."""
    n = spec.n
    A = []
    b = []
    for k in range(n + 1):
        row = [cols[i][k] for i in range(d + 1)]
        A.append(row)
        b.append(Fraction(1))
        A.append([-x for x in row])
        b.append(Fraction(0))
    row1 = [cols[i][spec.k1] for i in range(d + 1)]
    A.append([-x for x in row1])
    b.append(-(1 - c))
    row2 = [cols[i][spec.k2] for i in range(d + 1)]
    A.append(row2)
    b.append(c)
    return A, b


def _chebyshev_to_monomial(coeffs, n: int):
    """Exact conversion of sum_i y_i T_i(2x/n - 1) to monomials in x."""
    u = [Fraction(-1), Fraction(2, n)]  # the argument 2x/n - 1
    t_prev = [Fraction(1)]
    t_cur = u[:]
    out = [Fraction(0)] * max(len(coeffs), 1)
    out[0] += coeffs[0]
    if len(coeffs) > 1:
        for j, cj in enumerate(t_cur):
            out[j] += coeffs[1] * cj
    for i in range(2, len(coeffs)):
        t_next = _poly_sub(_poly_scale(_poly_mul(u, t_cur), 2), t_prev)
        t_prev, t_cur = t_cur, t_next
        for j, cj in enumerate(t_cur):
            out[j] += coeffs[i] * cj
    return out


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_scale(a, s):
    return [x * s for x in a]


def _poly_sub(a, b):
    out = list(a)
    while len(out) < len(b):
        out.append(Fraction(0))
    for j, bj in enumerate(b):
        out[j] -= bj
    return out


@dataclass(frozen=True)
class DegreeWitness:
    n: int
    k1: int
    k2: int
    c: float
    degree: int
    coefficients: list  # monomial basis in the weight variable, ascending
    exact: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k1": self.k1,
            "k2": self.k2,
            "c": self.c,
            "degree": self.degree,
            "coefficients": [float(x) for x in self.coefficients],
        }


def min_degree_lp(spec: PartialFnSpec, c) -> DegreeWitness:
    """Smallest degree admitting a polynomial with values in [0,1] on all
    integer nodes that is >= 1-c at k1 and <= c at k2.

    Feasibility is tested for d = 0, 1, 2, ... (monotone by construction,
    so the first feasible d is the answer); with the exact simplex below
    the size cutoff there is no tolerance to dispute.
    """
    if spec.n > LP_N_MAX:
        raise ValueError(f"degree oracle capped at n={LP_N_MAX}")
    c = Fraction(c).limit_denominator(10**9) if not isinstance(c, Fraction) else c
    if not 0 <= c < Fraction(1, 2):
        raise ValueError(f"c must lie in [0, 1/2), got {c}")
    exact = spec.n <= EXACT_LP_N_MAX
    cols = _chebyshev_node_table(spec.n, spec.n)
    for d in range(spec.n + 1):
        A, b = _lp_constraints(spec, c, cols, d)
        if exact:
            ok, witness = feasible_exact(A, b)
        else:
            ok, witness = feasible_float(
                [[float(x) for x in row] for row in A], [float(x) for x in b]
            )
        if ok:
            mono = _chebyshev_to_monomial(witness, spec.n)
            return DegreeWitness(
                n=spec.n,
                k1=spec.k1,
                k2=spec.k2,
                c=float(c),
                degree=d,
                coefficients=mono,
                exact=exact,
            )
    raise RuntimeError("interpolation degree bound exceeded; unreachable")


def acceptance_poly_of_distinguisher(
    est: EstimatorSpec, spec: PartialFnSpec, M: int, threshold: float
) -> UnivariatePolyValues:
    """Value table of the distinguisher's acceptance probability across
    all weight classes.  For symmetric estimators this is directly the
    symmetrized acceptance polynomial, so its minimal degree can be held
    against twice the query count."""
    if spec.n > SYMMETRIZE_N_MAX:
        raise ValueError(f"degree extraction capped at n={SYMMETRIZE_N_MAX}")
    values = np.empty(spec.n + 1)
    for k in range(spec.n + 1):
        d = est.distribution(WeightClass(spec.n, k), M)
        values[k] = acceptance_mass(d, spec.k1, threshold)
    return UnivariatePolyValues(spec.n, values)
