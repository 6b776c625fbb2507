"""Rank-two matroids as partitions with loops, sign vectors modulo negation,
and the refinement poset on signed matroids.

A matroid here is a partition of a subset of {1..n} into m >= 2 parts;
elements outside the partition are loops.  A sign vector lives on the
non-loops and is identified with its global negation; the canonical
representative puts + at the smallest support element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache, cached_property
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

#: enumeration guard; the censuses never need more than 10 particles
MAX_ENUM_N = 10


class MatroidError(ValueError):
    pass


@cache
def stirling2(p: int, k: int) -> int:
    """Number of partitions of a p-element set into exactly k nonempty parts."""
    if p < 0 or k < 0:
        raise MatroidError("stirling2 arguments must be non-negative")
    if p == 0 and k == 0:
        return 1
    if p == 0 or k == 0 or k > p:
        return 0
    return k * stirling2(p - 1, k) + stirling2(p - 1, k - 1)


@dataclass(frozen=True)
class RankTwoMatroid:
    """Partition of a subset of {1..n}; parts sorted by minimum element."""

    n: int
    parts: tuple

    def __post_init__(self):
        if self.n < 1:
            raise MatroidError("ground set must be nonempty")
        seen = set()
        for part in self.parts:
            if not part:
                raise MatroidError("parts must be nonempty")
            for e in part:
                if not (1 <= e <= self.n):
                    raise MatroidError(f"element {e} outside 1..{self.n}")
                if e in seen:
                    raise MatroidError(f"element {e} in two parts")
                seen.add(e)
        if len(self.parts) < 2:
            raise MatroidError("a rank-two matroid needs at least two parts")
        canonical = tuple(tuple(sorted(p)) for p in self.parts)
        if tuple(sorted(canonical, key=lambda p: p[0])) != canonical:
            raise MatroidError("parts must be sorted by minimum element")

    @classmethod
    def from_parts(cls, n: int, parts: Iterable[Iterable[int]]) -> "RankTwoMatroid":
        canon = sorted((tuple(sorted(p)) for p in parts), key=lambda p: p[0] if p else 0)
        return cls(n, tuple(canon))

    @classmethod
    def uniform(cls, n: int) -> "RankTwoMatroid":
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @property
    def m(self) -> int:
        return len(self.parts)

    @cached_property
    def non_loops(self) -> tuple:
        return tuple(sorted(e for part in self.parts for e in part))

    @cached_property
    def loops(self) -> tuple:
        covered = set(self.non_loops)
        return tuple(e for e in range(1, self.n + 1) if e not in covered)

    @property
    def l(self) -> int:
        return self.n - len(self.non_loops)

    @cached_property
    def part_index(self) -> Mapping[int, int]:
        return {e: k for k, part in enumerate(self.parts) for e in part}

    def is_loop(self, e: int) -> bool:
        return e not in self.part_index

    def parallel(self, i: int, j: int) -> bool:
        """True iff i and j are non-loops in the same part."""
        ki = self.part_index.get(i)
        return ki is not None and ki == self.part_index.get(j)

    def representatives(self) -> tuple:
        """Minimum element of each part, in part order."""
        return tuple(part[0] for part in self.parts)


def underlying_simple(P: RankTwoMatroid) -> RankTwoMatroid:
    """Loopless uniform matroid U_m obtained by collapsing each part to a point.

    The ground set is relabeled to {1..m}; use P.representatives() for the
    original labels (minimum element per part).
    """
    return RankTwoMatroid.uniform(P.m)


@dataclass(frozen=True)
class SignVector:
    """Signs +-1 on a support set, modulo global negation.

    Canonical form: the sign at the smallest support element is +1.
    """

    support: tuple
    signs: tuple

    def __post_init__(self):
        if len(self.support) != len(self.signs):
            raise MatroidError("support and signs must have equal length")
        if tuple(sorted(self.support)) != self.support:
            raise MatroidError("support must be sorted")
        if any(s not in (1, -1) for s in self.signs):
            raise MatroidError("signs must be +1 or -1")
        if self.signs and self.signs[0] != 1:
            raise MatroidError("canonical form requires + at the smallest support element")

    @classmethod
    def make(cls, assignment: Mapping[int, int] | Iterable[tuple]) -> "SignVector":
        items = sorted(dict(assignment).items())
        support = tuple(e for e, _ in items)
        signs = tuple(s for _, s in items)
        if signs and signs[0] == -1:
            signs = tuple(-s for s in signs)
        return cls(support, signs)

    def sign(self, e: int) -> int:
        try:
            return self.signs[self.support.index(e)]
        except ValueError:
            raise MatroidError(f"element {e} not in support") from None

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.signs))

    def restrict(self, subset: Iterable[int]) -> "SignVector":
        """Canonical restriction to the given elements of the support."""
        keep = set(subset)
        return SignVector.make({e: s for e, s in zip(self.support, self.signs) if e in keep})

    def negate_positions(self, flips: Iterable[int]) -> "SignVector":
        """Multiply the signs at the given support elements by -1, recanonicalized."""
        flip = set(flips)
        return SignVector.make({e: (-s if e in flip else s) for e, s in zip(self.support, self.signs)})


@dataclass(frozen=True)
class SignedMatroid:
    """A rank-two matroid together with a canonical sign vector on its non-loops."""

    matroid: RankTwoMatroid
    sigma: SignVector

    def __post_init__(self):
        if self.sigma.support != self.matroid.non_loops:
            raise MatroidError("sign support must equal the non-loop set")

    @classmethod
    def make(cls, matroid: RankTwoMatroid, assignment) -> "SignedMatroid":
        return cls(matroid, SignVector.make(assignment))

    @property
    def n(self) -> int:
        return self.matroid.n

    def to_json_dict(self) -> dict:
        return {
            "n": self.matroid.n,
            "parts": [list(p) for p in self.matroid.parts],
            "signs": {str(e): ("+" if s == 1 else "-") for e, s in self.sigma.as_dict().items()},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SignedMatroid":
        matroid = RankTwoMatroid.from_parts(int(data["n"]), data["parts"])
        assignment = {int(e): (1 if s == "+" else -1) for e, s in data["signs"].items()}
        return cls.make(matroid, assignment)


# -- poset ----------------------------------------------------------------


def matroid_leq(a: RankTwoMatroid, b: RankTwoMatroid) -> bool:
    """a <= b iff every loop of b is a loop of a and b refines a on a's non-loops."""
    if a.n != b.n:
        raise MatroidError("ground sets differ")
    if not set(b.loops) <= set(a.loops):
        return False
    # each part of b meets at most one part of a (restricted to a's non-loops)
    for part in b.parts:
        hit = {a.part_index[e] for e in part if e in a.part_index}
        if len(hit) > 1:
            return False
    # each part of a must be covered by b-parts entirely (no a-non-loop is a b-loop,
    # already implied by the loop inclusion)
    return True


def signed_leq(a: SignedMatroid, b: SignedMatroid) -> bool:
    """Signed poset order: matroid order plus sign agreement on a's non-loops."""
    if not matroid_leq(a.matroid, b.matroid):
        return False
    restricted = b.sigma.restrict(a.matroid.non_loops)
    return restricted == a.sigma


# -- enumeration -----------------------------------------------------------


def _set_partitions(elements: Sequence[int]) -> Iterator[tuple]:
    """All partitions of the elements, parts as sorted tuples ordered by minimum."""
    if not elements:
        yield ()
        return
    first, rest = elements[0], elements[1:]
    for sub in _set_partitions(rest):
        # first joins an existing part, or opens its own
        for k in range(len(sub)):
            yield ((first,) + sub[k],) + sub[:k] + sub[k + 1 :]
        yield ((first,),) + sub


def enumerate_matroids(n: int, min_parts: int = 2) -> Iterator[RankTwoMatroid]:
    """All partitions-with-loops on {1..n} with at least min_parts parts.

    Ordered by loop count, then loop set, then parts tuple; every matroid
    appears exactly once in canonical form.
    """
    if n > MAX_ENUM_N:
        raise MatroidError(f"enumeration limited to n <= {MAX_ENUM_N}")
    universe = tuple(range(1, n + 1))
    for l in range(0, n - min_parts + 1):
        for loop_set in combinations(universe, l):
            loops = set(loop_set)
            ground = [e for e in universe if e not in loops]
            batch = []
            for partition in _set_partitions(ground):
                if len(partition) >= min_parts:
                    parts = tuple(sorted(partition, key=lambda p: p[0]))
                    batch.append(parts)
            for parts in sorted(batch):
                yield RankTwoMatroid(n, parts)


def sign_vectors_on(support: Sequence[int]) -> Iterator[SignVector]:
    """All canonical sign vectors on the support (+ fixed at the smallest element)."""
    support = tuple(sorted(support))
    if not support:
        yield SignVector((), ())
        return
    for tail in product((1, -1), repeat=len(support) - 1):
        yield SignVector(support, (1,) + tail)


def enumerate_signed(n: int, min_parts: int = 2) -> Iterator[SignedMatroid]:
    """Every matroid paired with each of its 2^(n-l-1) canonical sign vectors."""
    for matroid in enumerate_matroids(n, min_parts):
        for sigma in sign_vectors_on(matroid.non_loops):
            yield SignedMatroid(matroid, sigma)


def count_matroids(n: int, l: int, m: int) -> int:
    """Closed-form count of matroids with l loops and m parts: C(n,l) S(n-l,m)."""
    if l < 0 or l > n or m < 2:
        return 0
    return comb(n, l) * stirling2(n - l, m)
