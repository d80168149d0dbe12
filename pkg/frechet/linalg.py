"""
Exact linear algebra over ``Fraction``: row reduction, unique solves and a
phase-one simplex with Bland's rule for feasibility problems.

Matrices are plain lists of rows. Inputs are never mutated.
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def mat_vec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> List[Fraction]:
    return [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def columns(a: Sequence[Sequence[Fraction]], cols: Sequence[int]) -> Matrix:
    return [[row[c] for c in cols] for row in a]


# -------------------------
# Row reduction
# -------------------------
def row_echelon(a: Sequence[Sequence], b: Optional[Sequence] = None) -> Tuple[Matrix, Optional[List[Fraction]], List[int]]:
    """
    Gaussian elimination to reduced row echelon form.

    Returns (reduced matrix, transformed right-hand side or None, pivot columns).
    """
    m = to_matrix(a)
    t = [Fraction(v) for v in b] if b is not None else None
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots = []
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            if t is not None:
                t[piv_r], t[i_row] = t[i_row], t[piv_r]
        fp = m[piv_r][piv_c]
        if fp != 1:
            m[piv_r] = [v / fp for v in m[piv_r]]
            if t is not None:
                t[piv_r] /= fp
        for r in range(n_rows):
            if r == piv_r:
                continue
            fr = m[r][piv_c]
            if fr == 0:
                continue
            m[r] = [vr - fr * vp for vr, vp in zip(m[r], m[piv_r])]
            if t is not None:
                t[r] -= fr * t[piv_r]
        pivots.append(piv_c)
        piv_r += 1
    return m, t, pivots


def rank(a: Sequence[Sequence]) -> int:
    return len(row_echelon(a)[2])


def solve_unique(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """The unique solution of a x = b, or None when inconsistent or underdetermined."""
    m, t, pivots = row_echelon(a, b)
    n_cols = len(m[0]) if m else 0
    if len(pivots) != n_cols:
        return None
    if any(v != 0 for v in t[len(pivots):]):
        return None
    return t[:n_cols]


def has_full_column_rank(a: Sequence[Sequence]) -> bool:
    n_cols = len(a[0]) if a else 0
    return rank(a) == n_cols


# -------------------------
# Phase-one simplex
# -------------------------
def feasible_point(a: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """
    A basic feasible solution of {x >= 0 : a x = b}, or None if the set is empty.

    Phase one of the simplex method on artificial variables. Entering columns
    and leaving rows follow Bland's rule (smallest index), so the result is
    deterministic and the method cannot cycle.
    """
    rows = to_matrix(a)
    rhs = [Fraction(v) for v in b]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    for r in range(n_rows):
        if rhs[r] < 0:
            rows[r] = [-v for v in rows[r]]
            rhs[r] = -rhs[r]

    # tableau columns: x (n_cols), artificials (n_rows), rhs
    tableau = []
    for r in range(n_rows):
        artificial = [Fraction(1) if k == r else Fraction(0) for k in range(n_rows)]
        tableau.append(rows[r] + artificial + [rhs[r]])
    basis = [n_cols + r for r in range(n_rows)]
    width = n_cols + n_rows + 1

    # reduced costs of "minimize sum of artificials"
    objective = [Fraction(0)] * width
    for r in range(n_rows):
        for k in range(n_cols):
            objective[k] -= tableau[r][k]
        objective[-1] -= tableau[r][-1]

    while True:
        entering = next((k for k in range(width - 1) if objective[k] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for r in range(n_rows):
            coef = tableau[r][entering]
            if coef <= 0:
                continue
            ratio = tableau[r][-1] / coef
            if best is None or ratio < best or (ratio == best and basis[r] < basis[leaving]):
                best, leaving = ratio, r
        if leaving is None:
            # phase one is bounded below by zero; unreachable for valid input
            break
        pivot = tableau[leaving][entering]
        tableau[leaving] = [v / pivot for v in tableau[leaving]]
        for r in range(n_rows):
            if r != leaving and tableau[r][entering] != 0:
                factor = tableau[r][entering]
                tableau[r] = [vr - factor * vp for vr, vp in zip(tableau[r], tableau[leaving])]
        factor = objective[entering]
        objective = [vo - factor * vp for vo, vp in zip(objective, tableau[leaving])]
        basis[leaving] = entering

    if objective[-1] != 0:
        return None
    x = [Fraction(0)] * n_cols
    for r, var in enumerate(basis):
        if var < n_cols:
            x[var] = tableau[r][-1]
    return x
