"""Exact-arithmetic feasibility solver for systems A x <= b with free x.

Phase-I simplex over the integers: rows are cleared of denominators up
front and pivoting uses the fraction-free update
new[i][j] = (new[r][c]*old[i][j] - old[i][c]*old[r][j]) / previous_pivot,
which keeps every entry an exact (bounded) integer determinant.  Bland's
rule guarantees termination.  A floating fallback via scipy's HiGHS
simplex is provided for sizes where exact pivoting is not worth it.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np


class SimplexError(Exception):
    pass


def _integerize(A, b):
    """Scale each row of [A | b] by the lcm of its denominators."""
    rows = []
    rhs = []
    for arow, bi in zip(A, b):
        fr = [Fraction(x) for x in arow]
        fb = Fraction(bi)
        denom = lcm(*(f.denominator for f in fr), fb.denominator)
        rows.append([int(f * denom) for f in fr])
        rhs.append(int(fb * denom))
    return rows, rhs


def feasible_exact(A, b):
    """Decide whether {x : A x <= b} is nonempty, exactly.

    Returns (feasible, witness) where witness is a list of Fractions
    satisfying every constraint (None when infeasible).
    """
    A, b = _integerize(A, b)
    m = len(A)
    if m == 0:
        return True, []
    nv = len(A[0])

    # columns: u (nv) | v (nv) | slacks (m) | artificials (na) | rhs
    neg_rows = [i for i in range(m) if b[i] < 0]
    na = len(neg_rows)
    art_col = {}
    ncols = 2 * nv + m + na + 1
    tab = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [0] * ncols
        for j in range(nv):
            row[j] = sign * A[i][j]
            row[nv + j] = -sign * A[i][j]
        row[2 * nv + i] = sign
        row[-1] = sign * b[i]
        tab.append(row)
    for idx, i in enumerate(neg_rows):
        col = 2 * nv + m + idx
        tab[i][col] = 1
        art_col[i] = col

    # objective: minimize sum of artificials, expressed over the
    # nonbasic columns as the sum of the artificial rows
    obj = [0] * ncols
    for i in neg_rows:
        for j in range(ncols):
            obj[j] += tab[i][j]
    for col in art_col.values():
        obj[col] = 0

    basis = []
    for i in range(m):
        basis.append(art_col[i] if i in art_col else 2 * nv + i)

    art_cols = set(art_col.values())
    prev = 1
    max_pivots = 20000 + 200 * (m + ncols)
    for _ in range(max_pivots):
        # Bland: smallest-index improving column (skip artificials)
        enter = -1
        for j in range(ncols - 1):
            if j in art_cols:
                continue
            if obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        # ratio test with integer cross-multiplication; Bland tie-break
        leave = -1
        for i in range(m):
            piv = tab[i][enter]
            if piv <= 0:
                continue
            if leave < 0:
                leave = i
                continue
            lhs = tab[i][-1] * tab[leave][enter]
            rhs = tab[leave][-1] * piv
            if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                leave = i
        if leave < 0:
            raise SimplexError("phase-I objective unbounded; malformed tableau")
        pivot = tab[leave][enter]
        prow = tab[leave]
        for i in range(m):
            if i == leave:
                continue
            f = tab[i][enter]
            if f == 0:
                if prev != 1:
                    tab[i] = [(x * pivot) // prev for x in tab[i]]
                else:
                    tab[i] = [x * pivot for x in tab[i]]
            else:
                tab[i] = [(x * pivot - f * pr) // prev for x, pr in zip(tab[i], prow)]
        f = obj[enter]
        obj = [(x * pivot - f * pr) // prev for x, pr in zip(obj, prow)]
        basis[leave] = enter
        prev = pivot
    else:
        raise SimplexError("pivot limit exceeded")

    if obj[-1] != 0:
        # residual infeasibility is -obj[-1]/prev > 0
        return False, None

    values = {}
    for i, bcol in enumerate(basis):
        values[bcol] = Fraction(tab[i][-1], prev)
    witness = [values.get(j, Fraction(0)) - values.get(nv + j, Fraction(0)) for j in range(nv)]
    return True, witness


def feasible_float(A, b, slack: float = 1e-9):
    """HiGHS-backed feasibility with an absolute constraint slack."""
    from scipy.optimize import linprog

    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64) + slack
    nv = A.shape[1]
    res = linprog(
        c=np.zeros(nv),
        A_ub=A,
        b_ub=b,
        bounds=[(None, None)] * nv,
        method="highs",
    )
    if res.status == 0:
        return True, [Fraction(x).limit_denominator(10**12) for x in res.x]
    if res.status == 2:
        return False, None
    raise SimplexError(f"linprog failed with status {res.status}: {res.message}")
