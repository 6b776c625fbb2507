"""Map a massless Mandelstam matrix to its stratum label (matroid, signs, rank).

Loops are the zero rows, parallel elements are the pairs with vanishing
entry, and the signs are recovered by 2-coloring the graph of nonzero
entries.  The zero pattern must be an equivalence relation and the coloring
consistent; both are verified and failures carry a small witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Literal, Optional

from . import exactmat
from .census import dim_massless, dim_mmc, nonempty_massless
from .exactmat import SymmetricMatrix, ZeroMatrixError
from .matroid import RankTwoMatroid, SignedMatroid

#: relative threshold below which a float entry counts as zero
ENTRY_TOL = 1e-9

Kind = Literal["mandelstam", "lorentzian", "mmc"]


class ClassificationError(ValueError):
    """Base error; the witness names the violated condition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonzeroDiagonalError(ClassificationError):
    pass


class IntransitiveZerosError(ClassificationError):
    """Zero pattern is not an equivalence relation on the non-loops."""


class InconsistentSignsError(ClassificationError):
    """No sign vector reproduces the entry signs (a triple product is negative)."""


class InvalidRankError(ClassificationError):
    """Rank incompatible with the partition (stratum would be empty)."""


@dataclass(frozen=True)
class StratumLabel:
    """A stratum index: signed matroid, rank, region kind, and dimension."""

    signed: SignedMatroid
    r: int
    kind: Kind
    d: int

    @classmethod
    def make(cls, signed: SignedMatroid, r: int, kind: Kind = "mandelstam") -> "StratumLabel":
        if kind == "mmc":
            d = dim_mmc(signed, r)
        else:
            if kind == "lorentzian" and any(s != 1 for s in signed.sigma.signs):
                raise ClassificationError("Lorentzian labels require an all-plus sign vector")
            d = dim_massless(signed.matroid, r)
        return cls(signed, r, kind, d)

    def to_json_dict(self) -> dict:
        out = self.signed.to_json_dict()
        out.update({"r": self.r, "kind": self.kind, "d": self.d})
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "StratumLabel":
        signed = SignedMatroid.from_json_dict(data)
        return cls.make(signed, int(data["r"]), data.get("kind", "mandelstam"))


def _zero_threshold(S: SymmetricMatrix) -> float:
    if S.mode == "exact":
        return 0.0
    return ENTRY_TOL * S.max_abs()


def _is_zero(value, tol: float) -> bool:
    return value == 0 if tol == 0.0 else abs(float(value)) <= tol


def classification_margin(S: SymmetricMatrix) -> float:
    """Smallest magnitude among the entries treated as nonzero (inf if none).

    Float labels near a stratum boundary are tolerance dependent; the margin
    lets callers judge how decisively the zero pattern was read.
    """
    tol = _zero_threshold(S)
    mags = [abs(float(v)) for v in S.upper if not _is_zero(v, tol)]
    return min(mags) if mags else float("inf")


def classify_massless(S: SymmetricMatrix) -> StratumLabel:
    """Stratum label of a massless Mandelstam matrix.

    The caller is responsible for Mandelstam membership; this function
    verifies the structural conditions it needs (zero diagonal, transitive
    zero pattern, consistent signs, rank admitted by the partition) and
    reports a witness when one fails.
    """
    tol = _zero_threshold(S)
    n = S.n
    for i in range(1, n + 1):
        if not _is_zero(S.entry(i, i), tol):
            raise NonzeroDiagonalError(f"diagonal entry ({i},{i}) is nonzero", witness=("diagonal", i))
    if S.is_zero() or S.max_abs() == 0.0:
        raise ZeroMatrixError("zero matrix has no stratum")

    zero = [[True] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            z = _is_zero(S.entry(i, j), tol)
            zero[i][j] = zero[j][i] = z

    loops = [i for i in range(1, n + 1) if all(zero[i][j] for j in range(1, n + 1) if j != i)]
    loop_set = set(loops)
    non_loops = [i for i in range(1, n + 1) if i not in loop_set]

    # candidate parts: connected components of the zero graph on non-loops
    part_of: dict = {}
    parts = []
    for i in non_loops:
        if i in part_of:
            continue
        component = [i]
        part_of[i] = len(parts)
        stack = [i]
        while stack:
            u = stack.pop()
            for v in non_loops:
                if v not in part_of and zero[u][v]:
                    part_of[v] = len(parts)
                    component.append(v)
                    stack.append(v)
        parts.append(sorted(component))

    # the zero relation must be complete inside each component
    for part in parts:
        for i, j in combinations(part, 2):
            if not zero[i][j]:
                witness = _intransitive_witness(zero, non_loops)
                raise IntransitiveZerosError(
                    "zero pattern is not transitive on the non-loops", witness=("triple", witness)
                )

    if len(parts) < 2:
        raise InvalidRankError(
            "all non-loops are mutually parallel; no rank-two matroid", witness=("parts", len(parts))
        )
    matroid = RankTwoMatroid.from_parts(n, parts)

    # 2-color the nonzero graph: sign(s_ij) = sigma_i sigma_j
    sigma = {non_loops[0]: 1}
    order = [non_loops[0]]
    seen = {non_loops[0]}
    while order:
        u = order.pop(0)
        for v in non_loops:
            if v not in seen and not zero[u][v]:
                sigma[v] = sigma[u] * (1 if float(S.entry(u, v)) > 0 else -1)
                seen.add(v)
                order.append(v)
    for i, j in combinations(non_loops, 2):
        if zero[i][j]:
            continue
        want = 1 if float(S.entry(i, j)) > 0 else -1
        if sigma[i] * sigma[j] != want:
            raise InconsistentSignsError(
                "entry signs admit no consistent sign vector",
                witness=("cycle", _sign_witness(S, zero, non_loops)),
            )

    r = exactmat.rank(S)
    if not nonempty_massless(matroid, r):
        raise InvalidRankError(
            f"rank {r} incompatible with {matroid.m} parts", witness=("rank", r, matroid.m)
        )

    signed = SignedMatroid.make(matroid, sigma)
    kind: Kind = "lorentzian" if all(s == 1 for s in signed.sigma.signs) else "mandelstam"
    return StratumLabel.make(signed, r, kind)


def _intransitive_witness(zero, non_loops) -> Optional[tuple]:
    for i, j, k in combinations(non_loops, 3):
        for a, b, c in ((i, j, k), (j, i, k), (i, k, j)):
            if zero[a][b] and zero[b][c] and not zero[a][c]:
                return (a, b, c)
    return None


def _sign_witness(S, zero, non_loops) -> Optional[tuple]:
    """A triple with negative entry product, else a 4-cycle violating the
    two-part sign relation (the bipartite case has no triangles)."""
    for i, j, k in combinations(non_loops, 3):
        if zero[i][j] or zero[i][k] or zero[j][k]:
            continue
        prod = float(S.entry(i, j)) * float(S.entry(i, k)) * float(S.entry(j, k))
        if prod < 0:
            return (i, j, k)
    for i, j, k, l in combinations(non_loops, 4):
        for (a, b), (c, d) in (((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))):
            if zero[a][b] and zero[c][d] and not (zero[a][c] or zero[a][d] or zero[b][c] or zero[b][d]):
                prod = (
                    float(S.entry(a, c))
                    * float(S.entry(b, c))
                    * float(S.entry(a, d))
                    * float(S.entry(b, d))
                )
                if prod < 0:
                    return (a, b, c, d)
    return None


def check_rank_one_blocks(S: SymmetricMatrix, P: RankTwoMatroid) -> bool:
    """True iff every off-diagonal block has all its 2x2 minors zero."""
    tol = 0.0 if S.mode == "exact" else ENTRY_TOL * S.max_abs() ** 2
    for a, b in combinations(range(P.m), 2):
        block_rows, block_cols = P.parts[a], P.parts[b]
        for i, i2 in combinations(block_rows, 2):
            for j, j2 in combinations(block_cols, 2):
                minor = S.entry(i, j) * S.entry(i2, j2) - S.entry(i, j2) * S.entry(i2, j)
                if not _is_zero(minor, tol):
                    return False
    return True
