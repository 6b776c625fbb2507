"""Small exact-rational linear programming solver.

Two-phase primal simplex over fractions with Bland's rule, for deciding
strict feasibility of sign conditions on linear forms.  Problems here have
a handful of variables and a few dozen constraints, so a dense tableau is
plenty; exactness is the point, not speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence


class SimplexError(RuntimeError):
    pass


class Unbounded(SimplexError):
    pass


def _pivot(tableau, basis, row, col):
    piv = tableau[row][col]
    inv = Fraction(1) / piv
    tableau[row] = [v * inv for v in tableau[row]]
    for r, line in enumerate(tableau):
        if r != row and line[col] != 0:
            factor = line[col]
            tableau[r] = [a - factor * b for a, b in zip(line, tableau[row])]
    basis[row] = col


def _solve_phase(tableau, basis, ncols):
    """Optimize the objective stored in the last tableau row (maximization,
    reduced costs negated).  Bland's rule guarantees termination."""
    while True:
        obj = tableau[-1]
        col = next((c for c in range(ncols) if obj[c] < 0), None)
        if col is None:
            return
        best_row = None
        best_ratio = None
        for r in range(len(tableau) - 1):
            coef = tableau[r][col]
            if coef > 0:
                ratio = tableau[r][-1] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[best_row])
                ):
                    best_row, best_ratio = r, ratio
        if best_row is None:
            raise Unbounded("objective unbounded above")
        _pivot(tableau, basis, best_row, col)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence):
    """Maximize c.x subject to A x <= b, x >= 0, all data rational.

    Returns (optimum, x) as Fractions.  Raises Unbounded when the objective
    is unbounded; the feasible region must be nonempty for some x >= 0 after
    phase one, otherwise SimplexError is raised.
    """
    m = len(A)
    nvar = len(c)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    rows = [[Fraction(v) for v in row] for row in A]

    # columns: nvar structural, m slacks, m artificials, rhs
    ncols = nvar + 2 * m
    tableau = []
    basis = []
    art_cols = []
    for i in range(m):
        row = rows[i] + [Fraction(0)] * (2 * m) + [b[i]]
        row[nvar + i] = Fraction(1)
        if b[i] < 0:
            row = [-v for v in row]
        art = nvar + m + i
        row[art] = Fraction(1)
        art_cols.append(art)
        tableau.append(row)
        basis.append(art)

    # phase one: minimize the artificial sum
    obj = [Fraction(0)] * (ncols + 1)
    for col in art_cols:
        obj[col] = Fraction(1)
    tableau.append(obj)
    for r in range(m):
        tableau[-1] = [a - bval for a, bval in zip(tableau[-1], tableau[r])]
    _solve_phase(tableau, basis, ncols)
    if -tableau[-1][-1] != 0:
        raise SimplexError("phase one failed: constraints infeasible for x >= 0")
    # drive remaining artificials out of the basis where possible
    for r in range(m):
        if basis[r] in art_cols:
            col = next(
                (ccc for ccc in range(nvar + m) if tableau[r][ccc] != 0),
                None,
            )
            if col is not None:
                _pivot(tableau, basis, r, col)
    tableau.pop()

    # phase two: original objective, artificial columns frozen
    obj = [Fraction(0)] * (ncols + 1)
    for idx in range(nvar):
        obj[idx] = -c[idx]
    tableau.append(obj)
    for r in range(m):
        col = basis[r]
        if tableau[-1][col] != 0:
            factor = tableau[-1][col]
            tableau[-1] = [a - factor * bval for a, bval in zip(tableau[-1], tableau[r])]
    _solve_phase(tableau, basis, nvar + m)

    x = [Fraction(0)] * nvar
    for r in range(m):
        if basis[r] < nvar:
            x[basis[r]] = tableau[r][-1]
    return tableau[-1][-1], x


def strict_feasible(forms: Sequence[Sequence], signs: Sequence[int], box: int = 1):
    """Decide whether some x satisfies signs_k * (forms_k . x) > 0 for all k.

    The forms are homogeneous with rational coefficients, so the system is
    strictly feasible iff the maximum over the box |x_i| <= box of the
    minimum slack is positive.  Returns (feasible, witness) where witness is
    an exact rational point with all strict inequalities when feasible.
    """
    nvar = len(forms[0])
    # shift x = u - box, u in [0, 2 box]; variables: u then the slack t >= 0
    A = []
    b = []
    for form, sign in zip(forms, signs):
        row = [-Fraction(sign) * Fraction(v) for v in form] + [Fraction(1)]
        shift = sum(Fraction(sign) * Fraction(v) * box for v in form)
        A.append(row)
        b.append(-shift)
    for i in range(nvar):
        row = [Fraction(0)] * (nvar + 1)
        row[i] = Fraction(1)
        A.append(row)
        b.append(Fraction(2 * box))
    row = [Fraction(0)] * (nvar + 1)
    row[nvar] = Fraction(1)
    A.append(row)
    b.append(Fraction(box))

    c = [Fraction(0)] * nvar + [Fraction(1)]
    opt, z = maximize(c, A, b)
    if opt <= 0:
        return False, None
    witness = [z[i] - box for i in range(nvar)]
    return True, witness
