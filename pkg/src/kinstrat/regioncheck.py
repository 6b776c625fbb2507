"""Exact verifiers for the two worked momentum-conserving regions.

For n = 4 the region lives in an (x, y) plane: three open cones of rank 3
separated by six rays of rank 2.  For n = 5 the region sits in a
5-dimensional parameter space whose ten entry forms define a hyperplane
arrangement; the census walks all strict sign assignments with an exact LP
and filters by the triple sign conditions, and the rank-4 stratum is cut
out by a single quartic equal to every principal 4x4 minor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import combinations, product
from typing import Optional, Sequence

from .classify import ClassificationError, StratumLabel, classify_massless
from .exactmat import SymmetricMatrix, ZeroMatrixError
from .matroid import SignedMatroid
from .simplex import strict_feasible

#: declared outcome for points outside the momentum-conserving region
OUTSIDE = "outside"

#: entry order used in all n=5 tables: strict upper triangle, row major
PAIRS5 = tuple((i, j) for i in range(1, 6) for j in range(i + 1, 6))


@dataclass(frozen=True)
class MMC4Point:
    x: Fraction
    y: Fraction

    @classmethod
    def make(cls, x, y) -> "MMC4Point":
        return cls(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class MMC5Point:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction

    @classmethod
    def make(cls, a, b, c, d, e) -> "MMC5Point":
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d), Fraction(e))

    def coords(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e)


def mmc4_matrix(p: MMC4Point) -> SymmetricMatrix:
    """The 4x4 momentum-conserving matrix of the planar picture; rank <= 3
    and all row sums identically zero."""
    x, y = p.x, p.y
    z = -x - y
    rows = [
        [0, x, z, y],
        [x, 0, y, z],
        [z, y, 0, x],
        [y, z, x, 0],
    ]
    return SymmetricMatrix.from_rows([[Fraction(v) for v in row] for row in rows], mode="exact")


def mmc4_classify(p: MMC4Point):
    """Stratum of the planar point, or OUTSIDE.

    Case analysis: -2xy(x+y) > 0 gives the three open cones at rank 3,
    exactly one vanishing coordinate among x, y, x+y gives the six rays at
    rank 2, the origin is the zero matrix, and everything else is outside.
    """
    x, y = p.x, p.y
    s = x + y
    if x == 0 and y == 0:
        return OUTSIDE
    if -2 * x * y * s < 0:
        return OUTSIDE
    label = classify_massless(mmc4_matrix(p))
    return StratumLabel.make(label.signed, label.r, kind="mmc")


def mmc5_matrix(p: MMC5Point) -> SymmetricMatrix:
    """The 5x5 momentum-conserving matrix in the five parameters; all row
    sums vanish identically and the generic rank is 4."""
    a, b, c, d, e = p.coords()
    rows = [
        [0, a, -a - b + d, b - d - e, e],
        [a, 0, b, -b - c + e, -a + c - e],
        [-a - b + d, b, 0, c, a - c - d],
        [b - d - e, -b - c + e, c, 0, d],
        [e, -a + c - e, a - c - d, d, 0],
    ]
    return SymmetricMatrix.from_rows([[Fraction(v) for v in row] for row in rows], mode="exact")


#: coefficient rows of the ten entry forms of the n=5 matrix, in PAIRS5 order
FORMS5 = (
    (1, 0, 0, 0, 0),      # s12 = a
    (-1, -1, 0, 1, 0),    # s13
    (0, 1, 0, -1, -1),    # s14
    (0, 0, 0, 0, 1),      # s15 = e
    (0, 1, 0, 0, 0),      # s23 = b
    (0, -1, -1, 0, 1),    # s24
    (-1, 0, 1, 0, -1),    # s25
    (0, 0, 1, 0, 0),      # s34 = c
    (1, 0, -1, -1, 0),    # s35
    (0, 0, 0, 1, 0),      # s45 = d
)


def igusa_quartic(p: MMC5Point) -> Fraction:
    """The quartic separating the rank-4 stratum from its boundary; it equals
    every principal 4x4 minor of the n=5 matrix."""
    a, b, c, d, e = p.coords()
    return (
        a * a * b * b
        + b * b * c * c
        + c * c * d * d
        + d * d * e * e
        + a * a * e * e
        + 2 * (a * b * c * d + a * b * c * e + a * b * d * e + a * c * d * e + b * c * d * e)
        - 2 * (a * b * b * c + b * c * c * d + c * d * d * e + a * d * e * e + a * a * b * e)
    )


def _triple_consistent(signs: Sequence[int]) -> bool:
    """All products sign(s_ij) sign(s_ik) sign(s_jk) positive."""
    idx = {pair: k for k, pair in enumerate(PAIRS5)}
    for i, j, k in combinations(range(1, 6), 3):
        if signs[idx[(i, j)]] * signs[idx[(i, k)]] * signs[idx[(j, k)]] < 0:
            return False
    return True


def _sigma_from_signs(signs: Sequence[int]) -> tuple:
    """Sign vector with sigma_i sigma_j = sign(s_ij), normalized to the
    representative with fewer minus signs."""
    idx = {pair: k for k, pair in enumerate(PAIRS5)}
    sigma = [1] * 5
    for j in range(2, 6):
        sigma[j - 1] = signs[idx[(1, j)]]
    if sum(1 for s in sigma if s == -1) > 2:
        sigma = [-s for s in sigma]
    return tuple(sigma)


@dataclass(frozen=True)
class ArrangementRow:
    """One surviving region of the arrangement census."""

    sigma: tuple
    signs: tuple
    witness: tuple  # exact rational interior point (a, b, c, d, e)


@cache
def arrangement_census():
    """Count the regions of the ten-hyperplane arrangement and list the ones
    satisfying all triple sign conditions.

    Every one of the 2^10 strict sign assignments is decided by exact LP (a
    region exists iff the max-min-slack optimum is positive); feasibility is
    checked on one representative per antipodal pair and mirrored.  Returns
    (region_count, rows) with the surviving rows ordered by the positions of
    the two minus signs in sigma.
    """
    region_count = 0
    survivors = []
    for assignment in product((1, -1), repeat=9):
        signs = (1,) + assignment
        feasible, witness = strict_feasible(FORMS5, signs)
        if not feasible:
            continue
        region_count += 2  # the antipodal assignment bounds the mirror region
        for eps, wit in ((signs, witness), (tuple(-s for s in signs), [-w for w in witness])):
            if _triple_consistent(eps):
                survivors.append(
                    ArrangementRow(_sigma_from_signs(eps), eps, tuple(Fraction(w) for w in wit))
                )
    survivors.sort(key=lambda row: tuple(k for k, s in enumerate(row.sigma) if s == -1))
    return region_count, tuple(survivors)


def igusa_boundary_point(inside: MMC5Point, outside: MMC5Point, max_iter: int = 200) -> MMC5Point:
    """Exact rational point with vanishing quartic on the segment between a
    negative-quartic and a positive-quartic point, by sign bisection.

    The bisection only terminates when a midpoint hits the quartic exactly,
    so callers should pick segments whose crossing has rational coordinates
    (a dyadic position on the segment).
    """
    q_in = igusa_quartic(inside)
    q_out = igusa_quartic(outside)
    if q_in >= 0 or q_out <= 0:
        raise ValueError("need quartic(inside) < 0 < quartic(outside)")
    lo, hi = Fraction(0), Fraction(1)
    a = inside.coords()
    b = outside.coords()
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        point = MMC5Point.make(*(ai + mid * (bi - ai) for ai, bi in zip(a, b)))
        q = igusa_quartic(point)
        if q == 0:
            return point
        if q < 0:
            lo = mid
        else:
            hi = mid
    raise ValueError("no exact rational crossing found on the segment")
