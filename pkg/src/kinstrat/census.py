"""Nonemptiness predicates, dimension formulas, and stratum counts for the
massless Mandelstam, Lorentzian, and momentum-conserving (MMC) regions.

Closed-form counts are cross-checked against brute-force enumeration of
signed matroids; the brute-force helpers live here too so the two routes
share nothing but the matroid enumeration.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterator, Literal, Optional

from .matroid import (
    RankTwoMatroid,
    SignedMatroid,
    SignVector,
    enumerate_matroids,
    enumerate_signed,
    stirling2,
)

Region = Literal["massless", "lorentzian", "mmc"]


class CensusError(ValueError):
    pass


class EmptyStratumError(CensusError):
    pass


# -- massless region -------------------------------------------------------


def nonempty_massless(P: RankTwoMatroid, r: int) -> bool:
    """A massless stratum with m parts is nonempty iff 3 <= r <= m or r = m = 2."""
    return (3 <= r <= P.m) or (r == 2 and P.m == 2)


def dim_massless(P: RankTwoMatroid, r: int) -> int:
    """Dimension m(r-2) + n - l - C(r,2) of a nonempty massless stratum."""
    if not nonempty_massless(P, r):
        raise EmptyStratumError(f"empty stratum: m={P.m}, r={r}")
    return P.m * (r - 2) + P.n - P.l - comb(r, 2)


def count_massless(n: int, r: int, d: int, all_sigma: bool) -> int:
    """Number of massless strata of dimension d at rank r.

    all_sigma=False counts matroids (equivalently, strata for one fixed sign
    vector); all_sigma=True weights each matroid by its 2^(n-l-1) sign classes.
    """
    if r < 2:
        return 0
    if r == 2:
        m_range = [2]
    else:
        m_max = (d + comb(r, 2)) // (r - 1)
        m_range = range(r, m_max + 1)
    total = 0
    for m in m_range:
        l = m * (r - 2) + n - comb(r, 2) - d
        if l < 0 or l > n:
            continue
        term = comb(n, l) * stirling2(n - l, m)
        if all_sigma:
            term *= 2 ** max(n - l - 1, 0)
        total += term
    return total


def count_rank2(n: int, d: int, region: str) -> int:
    """Rank-2 strata of dimension d: (2^d - 1) C(n, d+1) for the Lorentzian
    region, (2^(2d) - 2^d) C(n, d+1) for the full Mandelstam region."""
    if not 1 <= d <= n - 1:
        return 0
    base = (2**d - 1) * comb(n, d + 1)
    if region == "lorentzian":
        return base
    if region in ("mandelstam", "massless"):
        return 2**d * base
    raise CensusError(f"unknown region {region!r}")


# -- MMC region -------------------------------------------------------------


def mmc_admissible(sm: SignedMatroid, r: int) -> bool:
    """Whether a signed matroid admits momentum-conserving configurations at rank r.

    For r = m every part must carry both signs.  For 3 <= r < m there must be
    positives i,j and negatives k,l whose restriction is U_4 (four distinct
    parts) or pairs {i,k}, {j,l} in two distinct parts.
    """
    P = sm.matroid
    if not nonempty_massless(P, r):
        raise EmptyStratumError(f"empty underlying stratum: m={P.m}, r={r}")
    sigma = sm.sigma.as_dict()
    if r == P.m:
        for part in P.parts:
            signs = {sigma[e] for e in part}
            if len(signs) != 2:
                return False
        return True
    # 3 <= r < m
    pos = [e for e in P.non_loops if sigma[e] == 1]
    neg = [e for e in P.non_loops if sigma[e] == -1]
    pidx = P.part_index
    for i, j in combinations(pos, 2):
        for k, l in combinations(neg, 2):
            blocks = {pidx[i], pidx[j], pidx[k], pidx[l]}
            if len(blocks) == 4:
                return True
            if pidx[i] != pidx[j]:
                if (pidx[i] == pidx[k] and pidx[j] == pidx[l]) or (
                    pidx[i] == pidx[l] and pidx[j] == pidx[k]
                ):
                    return True
    return False


def dim_mmc(sm: SignedMatroid, r: int) -> int:
    """Dimension (m-1)(r-1) - C(r,2) + (n-l-m) - 1 of an admissible MMC stratum."""
    if not mmc_admissible(sm, r):
        raise EmptyStratumError("signed matroid is not momentum conserving at this rank")
    P = sm.matroid
    return (P.m - 1) * (r - 1) - comb(r, 2) + (P.n - P.l - P.m) - 1


def _mmc_loopless_count(q: int, m: int, r: int) -> int:
    """Momentum-conserving signed loopless matroids on q elements with m parts.

    Sums over p = number of positive signs, a/b = number of parts touched by
    positives/negatives, and the ways to overlay those blocks into m parts.
    For r = m every part must mix both signs, which forces a = b = m.
    """
    if m < 2 or q < m:
        return 0
    total = 0
    if r == m:
        for p in range(m, q - m + 1):
            total += comb(q, p) * stirling2(p, m) * stirling2(q - p, m) * factorial(m)
    else:
        for p in range(2, q - 1):
            for a in range(2, m + 1):
                sa = stirling2(p, a)
                if sa == 0:
                    continue
                for b in range(max(2, m - a), m + 1):
                    sb = stirling2(q - p, b)
                    if sb == 0:
                        continue
                    overlay = (
                        factorial(a)
                        * factorial(b)
                        // (factorial(m - a) * factorial(m - b) * factorial(a + b - m))
                    )
                    total += comb(q, p) * sa * sb * overlay
    assert total % 2 == 0
    return total // 2


def count_mmc(n: int, r: int, d: int) -> int:
    """Number of MMC strata of dimension d at rank r (all sign vectors)."""
    if r < 2:
        return 0
    if r == 2:
        m_range = [2]
    else:
        m_max = (d + r + comb(r, 2)) // (r - 1)
        m_range = range(r, m_max + 1)
    total = 0
    for m in m_range:
        l = (m - 1) * (r - 1) - comb(r, 2) + (n - d - m) - 1
        if l < 0 or l > n - m:
            continue
        total += comb(n, l) * _mmc_loopless_count(n - l, m, r)
    return total


def mmc_top_count(n: int) -> int:
    """Full-dimensional MMC strata: 2^(n-1) - n - 1 (zero below n = 4)."""
    if n < 4:
        return 0
    return 2 ** (n - 1) - n - 1


def components_r3(m: int) -> int:
    """Connected components of a rank-3 stratum with m parts: (m-1)!/2."""
    if m < 3:
        return 1
    return factorial(m - 1) // 2


# -- brute-force censuses ----------------------------------------------------


def balanced_sigma(n: int) -> tuple:
    """Canonical fixed sign vector used for fixed-sigma MMC counts:
    ceil(n/2) pluses followed by floor(n/2) minuses."""
    pluses = (n + 1) // 2
    return (1,) * pluses + (-1,) * (n - pluses)


def ranks_for(m: int, max_r: Optional[int] = None) -> Iterator[int]:
    """All ranks with a nonempty massless stratum for a matroid with m parts."""
    top = m if max_r is None else min(m, max_r)
    if m == 2:
        yield 2
    else:
        yield from range(3, top + 1)


def bruteforce_massless(n: int, all_sigma: bool) -> Counter:
    """Enumeration census of massless strata, keyed by (r, d).

    With all_sigma=False this counts matroids, which equals the stratum count
    for any one fixed sign vector.
    """
    counts: Counter = Counter()
    for P in enumerate_matroids(n):
        weight = 2 ** (n - P.l - 1) if all_sigma else 1
        for r in ranks_for(P.m):
            counts[(r, dim_massless(P, r))] += weight
    return counts


def bruteforce_mmc(n: int, sigma: Optional[tuple] = None) -> Counter:
    """Enumeration census of MMC strata keyed by (r, d).

    sigma=None counts over all canonical signed matroids; otherwise only
    strata whose sign vector is the restriction of the given full sign vector.
    """
    counts: Counter = Counter()
    if sigma is None:
        for sm in enumerate_signed(n):
            for r in ranks_for(sm.matroid.m):
                if mmc_admissible(sm, r):
                    counts[(r, dim_mmc(sm, r))] += 1
        return counts
    if len(sigma) != n:
        raise CensusError("fixed sign vector must have length n")
    for P in enumerate_matroids(n):
        sv = SignVector.make({e: sigma[e - 1] for e in P.non_loops})
        sm = SignedMatroid(P, sv)
        for r in ranks_for(P.m):
            if mmc_admissible(sm, r):
                counts[(r, dim_mmc(sm, r))] += 1
    return counts


# -- table assembly -----------------------------------------------------------


@dataclass(frozen=True)
class CensusRow:
    """One table cell: counts of strata of dimension d at rank r."""

    n: int
    r: int
    d: int
    count_fixed_sigma: int
    count_all_sigma: int

    def __post_init__(self):
        if self.count_fixed_sigma < 0 or self.count_all_sigma < self.count_fixed_sigma:
            raise CensusError("counts must satisfy 0 <= fixed <= all")


@dataclass(frozen=True)
class CensusQuery:
    n: int
    region: Region = "massless"
    r: Optional[int] = None
    d: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise CensusError("census needs n >= 2")
        if self.region not in ("massless", "lorentzian", "mmc"):
            raise CensusError(f"unknown region {self.region!r}")


def build_table(q: CensusQuery) -> list:
    """All nonzero census rows for the query, sorted by (d, r).

    For the massless/Lorentzian regions the fixed-sigma column is the
    Lorentzian stratum count and the all-sigma column the Mandelstam count.
    Fixed-sigma MMC counts come from enumeration with the balanced sign
    vector; no closed form is available for them.
    """
    rows = []
    d_max = comb(q.n, 2)
    if q.region == "mmc":
        fixed = bruteforce_mmc(q.n, balanced_sigma(q.n))
        for r in range(2, q.n + 1):
            if q.r is not None and r != q.r:
                continue
            for d in range(1, d_max + 1):
                if q.d is not None and d != q.d:
                    continue
                all_count = count_mmc(q.n, r, d)
                if all_count:
                    rows.append(CensusRow(q.n, r, d, fixed.get((r, d), 0), all_count))
    else:
        for r in range(2, q.n + 1):
            if q.r is not None and r != q.r:
                continue
            for d in range(1, d_max + 1):
                if q.d is not None and d != q.d:
                    continue
                all_count = count_massless(q.n, r, d, all_sigma=True)
                if all_count:
                    rows.append(CensusRow(q.n, r, d, count_massless(q.n, r, d, all_sigma=False), all_count))
    rows.sort(key=lambda row: (row.d, row.r))
    return rows


def check_bruteforce(q: CensusQuery) -> list:
    """Mismatches between build_table and enumeration; empty when consistent."""
    rows = build_table(q)
    if q.region == "mmc":
        all_counts = bruteforce_mmc(q.n)
        fixed_counts = bruteforce_mmc(q.n, balanced_sigma(q.n))
    else:
        all_counts = bruteforce_massless(q.n, all_sigma=True)
        fixed_counts = bruteforce_massless(q.n, all_sigma=False)
    mismatches = []
    keys = {(row.r, row.d) for row in rows} | set(all_counts) | set(fixed_counts)
    by_key = {(row.r, row.d): row for row in rows}
    for key in sorted(keys):
        r, d = key
        if q.r is not None and r != q.r:
            continue
        if q.d is not None and d != q.d:
            continue
        row = by_key.get(key)
        formula = (row.count_fixed_sigma, row.count_all_sigma) if row else (0, 0)
        brute = (fixed_counts.get(key, 0), all_counts.get(key, 0))
        if formula != brute:
            mismatches.append((key, formula, brute))
    return mismatches
