"""Shared fixtures: random rational matrices and exact momentum-conserving
configurations built from rational points on circles and spheres."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from kinstrat.exactmat import SymmetricMatrix, det_exact


def random_rational(rng, max_num=10, max_den=10) -> Fraction:
    num = int(rng.integers(-max_num, max_num + 1))
    den = int(rng.integers(1, max_den + 1))
    return Fraction(num, den)


def random_rational_symmetric(rng, n, max_num=10, max_den=10, zero_diag=False) -> SymmetricMatrix:
    entries = []
    for i in range(n):
        for j in range(i, n):
            if zero_diag and i == j:
                entries.append(Fraction(0))
            else:
                entries.append(random_rational(rng, max_num, max_den))
    return SymmetricMatrix(n, "exact", tuple(entries))


def rational_circle_point(t: Fraction) -> tuple:
    """Rational point on the unit circle from the tangent-half-angle map."""
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def rational_sphere_point(u: Fraction, v: Fraction) -> tuple:
    """Rational point on the unit 2-sphere by stereographic projection."""
    den = 1 + u * u + v * v
    return (2 * u / den, 2 * v / den, (1 - u * u - v * v) / den)


def exact_nullspace(rows):
    """Rational basis of the right null space, by exact elimination."""
    a = [list(r) for r in rows]
    nrows, ncols = len(a), len(a[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = Fraction(1) / a[row][col]
        a[row] = [v * inv for v in a[row]]
        for r in range(nrows):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for prow, pcol in enumerate(pivots):
            vec[pcol] = -a[prow][fc]
        basis.append(vec)
    return basis


def exact_conserving_gram(points, sign_pattern, rng, max_tries=2000):
    """Exact Gram matrix of light-cone momenta with zero total momentum.

    points: generator of rational unit vectors.  The multipliers are drawn
    from the rational kernel of the moment matrix [(1, x_i)]; small integer
    combinations of the kernel basis are searched for the requested sign
    pattern (up to global negation).  Returns (SymmetricMatrix, lam, pts).
    """
    n = len(sign_pattern)
    want = tuple(sign_pattern)
    combos = [
        (Fraction(aa), Fraction(bb)) for aa in range(-3, 4) for bb in range(-3, 4) if (aa, bb) != (0, 0)
    ]
    for _ in range(max_tries):
        pts = [points(rng) for _ in range(n)]
        if len({tuple(p) for p in pts}) < n:
            continue
        dim = len(pts[0])
        rows = [[Fraction(1)] * n] + [[pts[j][k] for j in range(n)] for k in range(dim)]
        basis = exact_nullspace(rows)
        if not basis:
            continue
        lam = None
        if len(basis) == 1:
            candidates = [basis[0]]
        else:
            candidates = [
                [aa * u + bb * v for u, v in zip(basis[0], basis[1])] for aa, bb in combos
            ]
        for cand in candidates:
            if any(v == 0 for v in cand):
                continue
            sgn = tuple(1 if v > 0 else -1 for v in cand)
            if sgn == want:
                lam = cand
                break
            if tuple(-s for s in sgn) == want:
                lam = [-v for v in cand]
                break
        if lam is None:
            continue
        scale = max(abs(v) for v in lam)
        lam = [v / scale for v in lam]
        entries = []
        for i in range(n):
            for j in range(i, n):
                if i == j:
                    entries.append(Fraction(0))
                else:
                    dot = sum(pts[i][k] * pts[j][k] for k in range(dim))
                    entries.append(lam[i] * lam[j] * (1 - dot))
        return SymmetricMatrix(n, "exact", tuple(entries)), lam, pts
    raise RuntimeError("no exact conserving configuration with the requested signs")


def random_circle_point(rng):
    return rational_circle_point(random_rational(rng, 6, 4))


def random_sphere_point(rng):
    return rational_sphere_point(random_rational(rng, 4, 3), random_rational(rng, 4, 3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240)
