"""Symmetric matrices of Mandelstam variables, with exact-rational and float scalars.

Only the upper triangle is stored, so symmetry is structural.  Exact mode keeps
entries as ``fractions.Fraction`` and decides all sign questions exactly
(fraction-free integer elimination for determinants); float mode uses numpy
with scale-aware tolerances.  Mixing modes in one operation is an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]

#: relative eigenvalue cutoff for numerical rank / signature queries
EIGEN_TOL = 1e-8
#: base factor of the scale-aware float minor tolerance
MINOR_TOL = 1e-9
#: minor_sign_test enumerates all 2^n - 1 index subsets; refuse beyond this
MAX_MINOR_N = 20


class MatrixError(ValueError):
    """Base class for domain errors raised by this module."""


class ModeMismatchError(MatrixError):
    """Raised when exact and float values meet in one operation."""


class ZeroMatrixError(MatrixError):
    """The zero matrix has rank 0 and belongs to no kinematic region."""


def _coerce_entry(value, mode: str) -> Scalar:
    if mode == "exact":
        if isinstance(value, float):
            raise ModeMismatchError("float entry in exact-mode matrix")
        return Fraction(value)
    if mode == "float":
        if isinstance(value, Fraction):
            raise ModeMismatchError("Fraction entry in float-mode matrix")
        return float(value)
    raise MatrixError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Signature:
    """Counts of decisively positive and negative eigenvalues."""

    n_pos: int
    n_neg: int

    @property
    def rank(self) -> int:
        return self.n_pos + self.n_neg


@dataclass(frozen=True)
class SymmetricMatrix:
    """n x n symmetric matrix stored as its upper triangle, row major.

    Indices are 1-based throughout the public API, matching the particle
    labels used by the matroid and census modules.
    """

    n: int
    mode: str
    upper: tuple

    def __post_init__(self):
        if self.n < 1:
            raise MatrixError("matrix size must be >= 1")
        expected = self.n * (self.n + 1) // 2
        if len(self.upper) != expected:
            raise MatrixError(f"expected {expected} upper-triangle entries, got {len(self.upper)}")
        coerced = tuple(_coerce_entry(v, self.mode) for v in self.upper)
        object.__setattr__(self, "upper", coerced)

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], mode: str = "exact") -> "SymmetricMatrix":
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise MatrixError("rows must form a square matrix")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise MatrixError(f"matrix not symmetric at ({i + 1},{j + 1})")
        upper = tuple(rows[i][j] for i in range(n) for j in range(i, n))
        return cls(n, mode, upper)

    @classmethod
    def from_upper(cls, n: int, entries: Iterable, mode: str = "exact") -> "SymmetricMatrix":
        return cls(n, mode, tuple(entries))

    @classmethod
    def zero(cls, n: int, mode: str = "exact") -> "SymmetricMatrix":
        fill = Fraction(0) if mode == "exact" else 0.0
        return cls(n, mode, (fill,) * (n * (n + 1) // 2))

    # -- access --------------------------------------------------------

    def _offset(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise MatrixError(f"index ({i},{j}) out of range for n={self.n}")
        if i > j:
            i, j = j, i
        return (i - 1) * (2 * self.n - i) // 2 + (j - 1)

    def entry(self, i: int, j: int) -> Scalar:
        return self.upper[self._offset(i, j)]

    def rows(self) -> list:
        return [[self.entry(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def submatrix(self, index_set: Sequence[int]) -> "SymmetricMatrix":
        idx = _check_subset(index_set, self.n)
        upper = tuple(self.entry(idx[a], idx[b]) for a in range(len(idx)) for b in range(a, len(idx)))
        return SymmetricMatrix(len(idx), self.mode, upper)

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i in range(1, self.n + 1):
            for j in range(i, self.n + 1):
                a[i - 1, j - 1] = a[j - 1, i - 1] = float(self.entry(i, j))
        return a

    def to_float(self) -> "SymmetricMatrix":
        if self.mode == "float":
            return self
        return SymmetricMatrix(self.n, "float", tuple(float(v) for v in self.upper))

    def max_abs(self) -> float:
        return max((abs(float(v)) for v in self.upper), default=0.0)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.upper)

    # -- JSON ----------------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.mode == "exact":
            entries = [str(v) for v in self.upper]
        else:
            entries = [float(v) for v in self.upper]
        return {"n": self.n, "mode": self.mode, "upper": entries}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SymmetricMatrix":
        mode = data["mode"]
        if mode == "exact":
            entries = tuple(Fraction(str(v)) for v in data["upper"])
        else:
            entries = tuple(float(v) for v in data["upper"])
        return cls(int(data["n"]), mode, entries)


def _check_subset(index_set: Sequence[int], n: int) -> tuple:
    idx = tuple(index_set)
    if not idx:
        raise MatrixError("index subset must be nonempty")
    if len(set(idx)) != len(idx):
        raise MatrixError("index subset has repeated entries")
    for i in idx:
        if not (1 <= i <= n):
            raise MatrixError(f"index {i} out of range 1..{n}")
    return tuple(sorted(idx))


# -- exact determinants and rank ----------------------------------------


def _bareiss_det_int(a: list) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix; mutates a."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[-1][-1]


def det_exact(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant via denominator clearing plus integer Bareiss."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in rows:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [[int(v * den) for v in row] for row in rows]
    return Fraction(_bareiss_det_int(ints), den**n)


def rank_exact(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank by exact Gaussian elimination with full pivot search."""
    a = [list(row) for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    rank = 0
    row = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if pivot_row is None:
            continue
        a[row], a[pivot_row] = a[pivot_row], a[row]
        pivot = a[row][col]
        for r in range(row + 1, nrows):
            if a[r][col] != 0:
                factor = a[r][col] / pivot
                for c in range(col, ncols):
                    a[r][c] -= factor * a[row][c]
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


# -- operations ----------------------------------------------------------


def principal_minor(S: SymmetricMatrix, index_set: Sequence[int]) -> Scalar:
    """det(S_I) for a nonempty index subset I of {1..n}."""
    idx = _check_subset(index_set, S.n)
    if S.mode == "exact":
        rows = [[S.entry(i, j) for j in idx] for i in idx]
        return det_exact(rows)
    a = S.to_array()
    sel = [i - 1 for i in idx]
    return float(np.linalg.det(a[np.ix_(sel, sel)]))


def minor_tolerance(S: SymmetricMatrix, size: int) -> float:
    """Scale-aware zero tolerance for a float minor of the given size."""
    return MINOR_TOL * S.max_abs() ** size


def minor_sign_test(S: SymmetricMatrix) -> bool:
    """True iff (-1)^(|I|-1) det(S_I) >= 0 for every nonempty I."""
    return _minor_violation(S) is None


def _minor_violation(S: SymmetricMatrix):
    """First index subset violating the alternating minor signs, or None.

    Subsets are scanned by size then lexicographically, so the witness is
    deterministic.
    """
    n = S.n
    if n > MAX_MINOR_N:
        raise MatrixError(f"minor sign test enumerates 2^n-1 subsets; n={n} exceeds limit {MAX_MINOR_N}")
    if S.mode == "exact":
        for size in range(1, n + 1):
            parity = -1 if size % 2 == 0 else 1
            for idx in combinations(range(1, n + 1), size):
                rows = [[S.entry(i, j) for j in idx] for i in idx]
                if parity * det_exact(rows) < 0:
                    return idx
        return None
    a = S.to_array()
    for size in range(1, n + 1):
        parity = -1.0 if size % 2 == 0 else 1.0
        tol = minor_tolerance(S, size)
        subsets = list(combinations(range(n), size))
        stacked = np.array([a[np.ix_(s, s)] for s in subsets])
        dets = np.linalg.det(stacked)
        bad = np.nonzero(parity * dets < -tol)[0]
        if bad.size:
            s = subsets[int(bad[0])]
            return tuple(i + 1 for i in s)
    return None


def eigen_signature(S: SymmetricMatrix, tol: float = EIGEN_TOL) -> Signature:
    """Counts of eigenvalues beyond +/- tol relative to the spectral radius.

    Exact matrices are converted to float first, so near-degenerate exact
    spectra may lose eigenvalues to the cutoff.
    """
    eigs = np.linalg.eigvalsh(S.to_array())
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    if scale == 0.0:
        return Signature(0, 0)
    cut = tol * scale
    return Signature(int(np.sum(eigs > cut)), int(np.sum(eigs < -cut)))


def rank(S: SymmetricMatrix, tol: float = EIGEN_TOL) -> int:
    """Matrix rank: exact elimination in exact mode, eigenvalue cutoff in float."""
    if S.mode == "exact":
        return rank_exact(S.rows())
    return eigen_signature(S, tol).rank


@dataclass(frozen=True)
class MandelstamVerdict:
    """Outcome of the membership test, with a witness on failure.

    The witness is either ("negative_diagonal", i) or ("minor_sign", I)
    where I is the offending principal index subset.
    """

    ok: bool
    rank: int | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_mandelstam(S: SymmetricMatrix) -> MandelstamVerdict:
    """Membership in the Mandelstam region, by the alternating minor signs.

    The zero matrix is rejected with ZeroMatrixError: it satisfies all the
    minor inequalities but has rank 0 and no positive eigenvalue.
    """
    if S.is_zero():
        raise ZeroMatrixError("zero matrix: rank 0, not in any Mandelstam region")
    if S.mode == "float":
        diag_tol = MINOR_TOL * S.max_abs()
        for i in range(1, S.n + 1):
            if float(S.entry(i, i)) < -diag_tol:
                return MandelstamVerdict(False, witness=("negative_diagonal", i))
    else:
        for i in range(1, S.n + 1):
            if S.entry(i, i) < 0:
                return MandelstamVerdict(False, witness=("negative_diagonal", i))
    bad = _minor_violation(S)
    if bad is not None:
        return MandelstamVerdict(False, witness=("minor_sign", bad))
    return MandelstamVerdict(True, rank=rank(S))


def conjugate_by_signs(S: SymmetricMatrix, signs: Sequence[int]) -> SymmetricMatrix:
    """Entrywise map s_ij -> signs_i signs_j s_ij (conjugation by diag(signs))."""
    if len(signs) != S.n:
        raise MatrixError(f"sign vector length {len(signs)} != n={S.n}")
    if any(s not in (1, -1) for s in signs):
        raise MatrixError("signs must be +1 or -1")
    entries = []
    for i in range(1, S.n + 1):
        for j in range(i, S.n + 1):
            v = S.entry(i, j)
            entries.append(v if signs[i - 1] == signs[j - 1] else -v)
    return SymmetricMatrix(S.n, S.mode, tuple(entries))


def row_sums(S: SymmetricMatrix) -> list:
    """All n row sums (= column sums, by symmetry)."""
    zero = Fraction(0) if S.mode == "exact" else 0.0
    return [sum((S.entry(i, j) for j in range(1, S.n + 1)), zero) for i in range(1, S.n + 1)]
