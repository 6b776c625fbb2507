"""Momentum configurations realizing a prescribed stratum, with or without
momentum conservation, plus numerical verification tools built on them:
Jacobian-rank dimension estimates, circle-order extraction for rank 3, and
closure perturbations between comparable strata.

A configuration is n light-cone vectors p_i = lambda_i (1, x_i) with unit
x_i in R^(r-1); members of one parallel class share their point and loops
have multiplier exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .census import EmptyStratumError, mmc_admissible, nonempty_massless
from .classify import ClassificationError, StratumLabel, classify_massless
from .exactmat import SymmetricMatrix, eigen_signature
from .matroid import SignedMatroid, signed_leq

#: numerical-rank cutoff relative to the largest singular value
RANK_TOL = 1e-8
#: central-difference step for Jacobians
FD_STEP = 1e-6
#: minimum pairwise distance between sampled sphere points
POINT_GAP = 5e-2
#: resampling budget for degenerate draws
MAX_RETRIES = 100
#: iteration budget for the momentum-conservation correction
MAX_NEWTON = 200


class RealizeError(RuntimeError):
    pass


class SamplingError(RealizeError):
    pass


class IncomparableLabelsError(RealizeError):
    pass


class ResolutionError(RealizeError):
    """Requested perturbation size is below the float classification
    resolution: an entry between two former loops scales like the squared
    multiplier budget, and for small eps that product sinks under the
    classifier's relative zero threshold."""


class CyclicOrderError(RealizeError):
    pass


@dataclass(frozen=True)
class MomentumConfig:
    """n light-cone momenta: multipliers and unit points in R^(r-1)."""

    n: int
    r: int
    lambdas: tuple
    points: tuple
    seed: Optional[int] = None

    def lam_array(self) -> np.ndarray:
        return np.array(self.lambdas, dtype=float)

    def point_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(self.n, self.r - 1)

    def momenta(self) -> np.ndarray:
        """Rows p_i = lambda_i (1, x_i) in R^r."""
        lam = self.lam_array()
        pts = self.point_array()
        return lam[:, None] * np.hstack([np.ones((self.n, 1)), pts])

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "lambdas": list(map(float, self.lambdas)),
            "points": [list(map(float, row)) for row in self.point_array()],
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MomentumConfig":
        pts = tuple(tuple(float(v) for v in row) for row in data["points"])
        return cls(
            int(data["n"]),
            int(data["r"]),
            tuple(float(v) for v in data["lambdas"]),
            pts,
            data.get("seed"),
        )


def _config(n, r, lam, pts, seed=None) -> MomentumConfig:
    pts = np.asarray(pts, dtype=float).reshape(n, r - 1)
    return MomentumConfig(n, r, tuple(map(float, lam)), tuple(map(tuple, pts)), seed)


def gram(config: MomentumConfig) -> SymmetricMatrix:
    """Gram matrix s_ij = lambda_i lambda_j (1 - <x_i, x_j>), float mode."""
    lam = config.lam_array()
    pts = config.point_array()
    G = np.outer(lam, lam) * (1.0 - pts @ pts.T)
    n = config.n
    upper = tuple(float(G[i, j]) for i in range(n) for j in range(i, n))
    return SymmetricMatrix(n, "float", upper)


@dataclass(frozen=True)
class NormalizedGram:
    """Part-level matrix t with t_uv = 1 - <x_u, x_v>; zero diagonal, 0 <= t <= 2."""

    t: tuple

    @classmethod
    def from_points(cls, pts: np.ndarray) -> "NormalizedGram":
        t = 1.0 - pts @ pts.T
        np.fill_diagonal(t, 0.0)
        return cls(tuple(map(tuple, t)))

    def array(self) -> np.ndarray:
        return np.array(self.t, dtype=float)


# -- random pieces -----------------------------------------------------------


def _unit_vectors(rng, count: int, dim: int) -> np.ndarray:
    if dim == 1:
        # S^0 has two points; callers place parts explicitly in this case
        return rng.choice([-1.0, 1.0], size=(count, 1))
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _magnitudes(rng, count: int) -> np.ndarray:
    # log-uniform in [0.5, 2] keeps the Jacobians well conditioned
    return np.exp(rng.uniform(math.log(0.5), math.log(2.0), size=count))


def _points_well_separated(pts: np.ndarray, gap: float = POINT_GAP) -> bool:
    m = len(pts)
    for a in range(m):
        for b in range(a + 1, m):
            if np.linalg.norm(pts[a] - pts[b]) < gap:
                return False
    return True


def _spread_points(rng, m: int, dim: int) -> Optional[np.ndarray]:
    for _ in range(20):
        pts = _unit_vectors(rng, m, dim)
        if _points_well_separated(pts):
            return pts
    return None


def _label_matches(G: SymmetricMatrix, sm: SignedMatroid, r: int) -> bool:
    try:
        label = classify_massless(G)
    except (ClassificationError, ValueError):
        return False
    return label.signed == sm and label.r == r


def _assemble(sm: SignedMatroid, r: int, part_points: np.ndarray, lam_nonloop: dict, rng, seed):
    """Spread part points onto particles; loops get lambda 0 and a dummy point."""
    P = sm.matroid
    n = P.n
    pts = np.zeros((n, r - 1))
    lam = np.zeros(n)
    for k, part in enumerate(P.parts):
        for e in part:
            pts[e - 1] = part_points[k]
            lam[e - 1] = lam_nonloop[e]
    for e in P.loops:
        pts[e - 1] = _unit_vectors(rng, 1, r - 1)[0]
    return _config(n, r, lam, pts, seed)


def sample_stratum(sm: SignedMatroid, r: int, seed: Optional[int] = None) -> MomentumConfig:
    """Random interior configuration of the massless stratum (sm, r).

    Draws m generic unit points (two antipodal rays when r = 2), signs the
    multipliers by sigma, and resamples until the classification round-trips.
    """
    P = sm.matroid
    if not nonempty_massless(P, r):
        raise EmptyStratumError(f"empty stratum: m={P.m}, r={r}")
    rng = np.random.default_rng(seed)
    sigma = sm.sigma.as_dict()
    for _ in range(MAX_RETRIES):
        if r == 2:
            part_points = np.array([[1.0], [-1.0]])
        else:
            part_points = _spread_points(rng, P.m, r - 1)
            if part_points is None:
                continue
        mags = _magnitudes(rng, len(P.non_loops))
        lam = {e: sigma[e] * mags[k] for k, e in enumerate(P.non_loops)}
        config = _assemble(sm, r, part_points, lam, rng, seed)
        if _label_matches(gram(config), sm, r):
            return config
    raise SamplingError(f"no generic sample found in {MAX_RETRIES} attempts")


# -- momentum conservation -----------------------------------------------------


def total_momentum(config: MomentumConfig) -> np.ndarray:
    return config.momenta().sum(axis=0)


def _find_quadruple(sm: SignedMatroid):
    """First (i, j, k, l) with sigma_i = sigma_j = +, sigma_k = sigma_l = -,
    restricting to U_4 or to the pairing {i,k}, {j,l}."""
    P = sm.matroid
    sigma = sm.sigma.as_dict()
    pos = [e for e in P.non_loops if sigma[e] == 1]
    neg = [e for e in P.non_loops if sigma[e] == -1]
    pidx = P.part_index
    for i, j in combinations(pos, 2):
        for k, l in combinations(neg, 2):
            if len({pidx[i], pidx[j], pidx[k], pidx[l]}) == 4:
                return (i, j, k, l), "u4"
            if pidx[i] != pidx[j]:
                if pidx[i] == pidx[k] and pidx[j] == pidx[l]:
                    return (i, j, k, l), "paired"
                if pidx[i] == pidx[l] and pidx[j] == pidx[k]:
                    return (i, j, l, k), "paired"
    return None, None


def _tangent_basis(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space at a unit vector (columns)."""
    dim = len(x)
    a = np.eye(dim) - np.outer(x, x)
    q, rr = np.linalg.qr(np.column_stack([x, a]))
    return q[:, 1:dim]


def _retract(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _conservation_correction(lam, pts, part_points, sm, quad, qparts, rng):
    """Damped Gauss-Newton on the total momentum, moving only the seed
    quadruple's multipliers and its parts' points."""
    P = sm.matroid
    n = P.n
    r = part_points.shape[1] + 1
    qlam_idx = [e - 1 for e in quad]
    charts = {q: (_tangent_basis(part_points[q]), part_points[q].copy()) for q in qparts}
    nq = len(qparts)
    dim_theta = 4 + nq * (r - 2)

    def build(theta):
        lam2 = lam.copy()
        for a, idx in enumerate(qlam_idx):
            lam2[idx] = theta[a]
        pp = part_points.copy()
        for b, q in enumerate(qparts):
            U, x0 = charts[q]
            u = theta[4 + b * (r - 2) : 4 + (b + 1) * (r - 2)]
            pp[q] = _retract(x0 + U @ u)
        pts2 = pts.copy()
        for k, part in enumerate(P.parts):
            for e in part:
                pts2[e - 1] = pp[k]
        return lam2, pts2, pp

    def residual(theta):
        lam2, pts2, _ = build(theta)
        mom = lam2[:, None] * np.hstack([np.ones((n, 1)), pts2])
        return mom.sum(axis=0)

    theta = np.zeros(dim_theta)
    theta[:4] = [lam[i] for i in qlam_idx]
    res = residual(theta)
    for _ in range(MAX_NEWTON):
        norm = np.max(np.abs(res))
        if norm <= 1e-13:
            break
        J = np.zeros((r, dim_theta))
        for c in range(dim_theta):
            h = FD_STEP
            e = np.zeros(dim_theta)
            e[c] = h
            J[:, c] = (residual(theta + e) - residual(theta - e)) / (2 * h)
        step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        scale = 1.0
        for _ in range(25):
            cand = theta + scale * step
            cres = residual(cand)
            if np.max(np.abs(cres)) < norm:
                theta, res = cand, cres
                break
            scale *= 0.5
        else:
            return None
    else:
        return None
    lam2, pts2, pp = build(theta)
    return lam2, pts2, pp


def sample_mmc(sm: SignedMatroid, r: int, seed: Optional[int] = None) -> MomentumConfig:
    """Momentum-conserving configuration in the stratum (sm, r).

    For r = m the multipliers are balanced within each part so every part's
    momentum sum vanishes exactly.  For r < m a seed quadruple with
    x_i + x_j = x_k + x_l cancels at unit multipliers, the remaining momenta
    are small, and a Gauss-Newton step on the quadruple restores the total
    to zero.
    """
    P = sm.matroid
    if not mmc_admissible(sm, r):
        raise EmptyStratumError("signed matroid is not momentum conserving at this rank")
    rng = np.random.default_rng(seed)
    sigma = sm.sigma.as_dict()
    n = P.n

    for _ in range(MAX_RETRIES):
        if r == P.m:
            part_points = (
                np.array([[1.0], [-1.0]]) if r == 2 else _spread_points(rng, P.m, r - 1)
            )
            if part_points is None:
                continue
            lam = {}
            ok = True
            for part in P.parts:
                plus = [e for e in part if sigma[e] == 1]
                minus = [e for e in part if sigma[e] == -1]
                if not plus or not minus:
                    ok = False
                    break
                wp = _magnitudes(rng, len(plus))
                wm = _magnitudes(rng, len(minus))
                wm *= wp.sum() / wm.sum()
                for e, w in zip(plus, wp):
                    lam[e] = w
                for e, w in zip(minus, wm):
                    lam[e] = -w
            if not ok:
                break
            config = _assemble(sm, r, part_points, lam, rng, seed)
        else:
            quad, kind = _find_quadruple(sm)
            if quad is None:
                raise EmptyStratumError("no admissible seed quadruple")
            i, j, k, l = quad
            pidx = P.part_index
            part_points = _spread_points(rng, P.m, r - 1)
            if part_points is None:
                continue
            if kind == "u4":
                # split the timelike vector p_i + p_j into two forward null
                # vectors: this seeds exact conservation at any rank >= 3
                mu_i, mu_j = _magnitudes(rng, 2)
                w0 = mu_i + mu_j
                ws = mu_i * part_points[pidx[i]] + mu_j * part_points[pidx[j]]
                xk = _unit_vectors(rng, 1, r - 1)[0]
                mu_k = (w0**2 - float(ws @ ws)) / (2.0 * (w0 - float(ws @ xk)))
                mu_l = w0 - mu_k
                if min(mu_k, mu_l) < 0.05:
                    continue
                xl = (ws - mu_k * xk) / mu_l
                part_points[pidx[k]] = xk
                part_points[pidx[l]] = xl
                quad_mults = (mu_i, mu_j, -mu_k, -mu_l)
            else:
                part_points[pidx[k]] = part_points[pidx[i]]
                part_points[pidx[l]] = part_points[pidx[j]]
                mu_i, mu_j = _magnitudes(rng, 2)
                quad_mults = (mu_i, mu_j, -mu_i, -mu_j)
            if not _points_well_separated(part_points, gap=1e-3):
                continue

            small = 0.05 * _magnitudes(rng, len(P.non_loops))
            lam_map = {}
            for idx, e in enumerate(P.non_loops):
                lam_map[e] = sigma[e] * small[idx]
            for e, val in zip(quad, quad_mults):
                lam_map[e] = val

            pts = np.zeros((n, r - 1))
            lam = np.zeros(n)
            for kk, part in enumerate(P.parts):
                for e in part:
                    pts[e - 1] = part_points[kk]
                    lam[e - 1] = lam_map[e]
            for e in P.loops:
                pts[e - 1] = _unit_vectors(rng, 1, r - 1)[0]

            qparts = sorted({pidx[e] for e in quad})
            fixed = _conservation_correction(lam, pts, part_points, sm, quad, qparts, rng)
            if fixed is None:
                continue
            lam2, pts2, _ = fixed
            if any(lam2[e - 1] * sigma[e] <= 0 for e in P.non_loops):
                continue
            config = _config(n, r, lam2, pts2, seed)

        if np.max(np.abs(total_momentum(config))) > 1e-11:
            continue
        G = gram(config)
        if not _label_matches(G, sm, r):
            continue
        sig = eigen_signature(G)
        if (sig.n_pos, sig.n_neg) != (1, r - 1):
            continue
        return config
    raise SamplingError(f"no momentum-conserving sample found in {MAX_RETRIES} attempts")


# -- dimension verification -----------------------------------------------------


def _stratum_map(sm: SignedMatroid, base: MomentumConfig):
    """Smooth parametrization around the base configuration.

    Parameters are one tangent chart per part point plus one multiplier per
    non-loop; the value is the vector of strict upper-triangle Gram entries.
    Returns (F, G, dim_theta) where G is the total-momentum map.
    """
    P = sm.matroid
    n, r = base.n, base.r
    pts0 = base.point_array()
    lam0 = base.lam_array()
    reps = P.representatives()
    charts = []
    for rep in reps:
        x0 = pts0[rep - 1]
        charts.append((x0, _tangent_basis(x0) if r > 2 else None))
    k_pt = r - 2
    non_loops = P.non_loops
    dim_theta = P.m * k_pt + len(non_loops)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]

    def unpack(theta):
        pts = pts0.copy()
        for q, (x0, U) in enumerate(charts):
            if k_pt:
                u = theta[q * k_pt : (q + 1) * k_pt]
                x = _retract(x0 + U @ u)
            else:
                x = x0
            for e in P.parts[q]:
                pts[e - 1] = x
        lam = lam0.copy()
        for idx, e in enumerate(non_loops):
            lam[e - 1] = theta[P.m * k_pt + idx]
        return lam, pts

    def F(theta):
        lam, pts = unpack(theta)
        G = np.outer(lam, lam) * (1.0 - pts @ pts.T)
        return np.array([G[a, b] for a, b in pairs])

    def G_map(theta):
        lam, pts = unpack(theta)
        mom = lam[:, None] * np.hstack([np.ones((n, 1)), pts])
        return mom.sum(axis=0)

    theta0 = np.zeros(dim_theta)
    theta0[P.m * k_pt :] = [lam0[e - 1] for e in non_loops]
    return F, G_map, theta0


def _jacobian(F, theta0, out_dim, step=FD_STEP) -> np.ndarray:
    dim = len(theta0)
    J = np.zeros((out_dim, dim))
    for c in range(dim):
        e = np.zeros(dim)
        e[c] = step
        J[:, c] = (F(theta0 + e) - F(theta0 - e)) / (2 * step)
    return J


def _numerical_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def estimate_dimension(
    sm: SignedMatroid, r: int, mmc: bool = False, seed: Optional[int] = None
) -> int:
    """Numerical stratum dimension: rank of the parametrization Jacobian
    into Mandelstam coordinates at a random interior configuration, with the
    momentum-conservation constraints composed in when mmc is set."""
    base = sample_mmc(sm, r, seed) if mmc else sample_stratum(sm, r, seed)
    F, G_map, theta0 = _stratum_map(sm, base)
    out_dim = base.n * (base.n - 1) // 2
    J = _jacobian(F, theta0, out_dim)
    if not mmc:
        return _numerical_rank(J)
    JG = _jacobian(G_map, theta0, base.r)
    _, sv, vh = np.linalg.svd(JG)
    keep = int(np.sum(sv > RANK_TOL * sv[0])) if sv.size and sv[0] > 0 else 0
    null_basis = vh[keep:].T
    return _numerical_rank(J @ null_basis)


# -- cyclic orders (rank 3) ------------------------------------------------------


def _normalized_from_matrix(S: SymmetricMatrix, label: StratumLabel) -> np.ndarray:
    """Recover the part-level normalized Gram from a rank-3 matrix by
    factoring out the multipliers via an eigendecomposition."""
    P = label.signed.matroid
    reps = P.representatives()
    a = S.to_array()
    sel = [e - 1 for e in reps]
    T = a[np.ix_(sel, sel)]
    w, v = np.linalg.eigh(T)
    if not (w[-1] > 0 and w[0] < 0 and w[1] < 0):
        raise CyclicOrderError("matrix does not have signature (1,2) on representatives")
    M = np.column_stack(
        [
            math.sqrt(w[-1]) * v[:, -1],
            math.sqrt(-w[0]) * v[:, 0],
            math.sqrt(-w[1]) * v[:, 1],
        ]
    )
    lam = M[:, 0]
    if np.min(np.abs(lam)) < 1e-12:
        raise CyclicOrderError("degenerate factorization: zero multiplier")
    x = M[:, 1:] / lam[:, None]
    t = 1.0 - x @ x.T
    np.fill_diagonal(t, 0.0)
    return t


def cyclic_order(S: SymmetricMatrix, tol: float = 1e-7) -> tuple:
    """Cyclic arrangement of the parts of a rank-3 matrix on the circle,
    canonical up to rotation and reflection.

    Angles are read off the normalized Gram: cos(theta_u) = 1 - t_1u fixes
    each angle up to sign, and consistency with t_2u picks the branch.
    Returns the parts' minimum elements in circular order.
    """
    label = classify_massless(S)
    if label.r != 3:
        raise CyclicOrderError(f"cyclic orders need rank 3, got rank {label.r}")
    t = _normalized_from_matrix(S, label)
    m = len(t)
    cos1 = 1.0 - t[0]
    if np.max(np.abs(cos1)) > 1.0 + tol:
        raise CyclicOrderError("inconsistent angles: |cos| exceeds 1")
    cos1 = np.clip(cos1, -1.0, 1.0)
    theta = np.zeros(m)
    theta[1] = math.acos(cos1[1])
    for u in range(2, m):
        base = math.acos(cos1[u])
        best, err = None, None
        for cand in (base, -base):
            want = 1.0 - t[1][u]
            got = math.cos(cand - theta[1])
            e = abs(got - want)
            if err is None or e < err:
                best, err = cand, e
        if err > tol:
            raise CyclicOrderError(f"inconsistent angles: branch error {err:.2e}")
        theta[u] = best
    order = sorted(range(m), key=lambda q: theta[q] % (2 * math.pi))
    reps = label.signed.matroid.representatives()
    seq = tuple(reps[q] for q in order)
    return canonical_cycle(seq)


def canonical_cycle(seq: tuple) -> tuple:
    """Lexicographically smallest representative among rotations and reflections."""
    candidates = []
    n = len(seq)
    for direction in (tuple(seq), tuple(reversed(seq))):
        for shift in range(n):
            candidates.append(direction[shift:] + direction[:shift])
    return min(candidates)


# -- closure perturbations ---------------------------------------------------------


def perturb_to_refinement(
    config: MomentumConfig,
    target: SignedMatroid,
    r: int,
    eps: float,
    seed: Optional[int] = None,
) -> MomentumConfig:
    """Configuration in the target stratum whose Gram matrix is within eps
    (max entry norm) of gram(config).

    The source label must lie below the target in the signed poset and the
    target rank must be at least the source rank.  Former loops receive tiny
    multipliers, split parts get slightly separated points, extra rank enters
    through small components in fresh directions, and a Gauss-Newton polish
    pulls the unsplit entries back toward their source values.
    """
    G0 = gram(config)
    src = classify_massless(G0)
    if src.signed == target and src.r == r:
        return config
    if not signed_leq(src.signed, target):
        raise IncomparableLabelsError("source label is not below the target in the signed poset")
    if not nonempty_massless(target.matroid, r):
        raise EmptyStratumError(f"empty target stratum: m={target.matroid.m}, r={r}")
    if r < src.r:
        raise IncomparableLabelsError("target rank below source rank: closure goes the other way")

    rng = np.random.default_rng(seed)
    src_m = src.signed.matroid
    n = config.n
    sigma_t = target.sigma.as_dict()
    a0 = G0.to_array()
    src_pts = config.point_array()
    src_lam = config.lam_array()
    tgt_m = target.matroid
    lam_max = float(np.max(np.abs(src_lam))) if src_m.non_loops else 1.0

    # perturbation scales, all proportional to eps so distances shrink with it
    eta = eps / (4.0 * max(1.0, lam_max))  # multipliers for former loops
    rho = eps / 100.0                      # magnitude prescribed for split entries
    beta = 0.03 * math.sqrt(eps)           # fresh-direction components (rank raise)

    base_part = {e: src_m.part_index.get(e) for e in range(1, n + 1)}
    new_loop_parts = [
        k
        for k, part in enumerate(tgt_m.parts)
        if not any(base_part[e] is not None for e in part)
    ]
    if len(new_loop_parts) >= 2:
        # entries between two former loops are eta^2-sized; below the float
        # classification threshold they cannot be told from zero
        if 0.8 * eta * eta < 8.0 * 1e-9 * float(np.max(np.abs(a0))):
            raise ResolutionError(
                f"eps={eps:g} is below the classification resolution for a pair "
                "introducing two or more loops into distinct parts"
            )

    for _ in range(MAX_RETRIES):
        lam_min = float(np.min(np.abs(src_lam[[e - 1 for e in src_m.non_loops]])))
        alpha = math.sqrt(2.0 * rho) / max(lam_min, 1e-3)

        siblings: dict = {}
        for k, part in enumerate(tgt_m.parts):
            bases = {base_part[e] for e in part if base_part[e] is not None}
            siblings.setdefault(next(iter(bases)) if bases else None, []).append(k)

        # points for parts made of former loops: mutually well spread, so the
        # eta^2-sized entries between them sit safely above the zero threshold
        loop_part_points = None
        for _ in range(50):
            cand = _unit_vectors(rng, len(new_loop_parts), r - 1)
            t_cand = 1.0 - cand @ cand.T
            np.fill_diagonal(t_cand, 1.0)
            if len(new_loop_parts) < 2 or float(t_cand.min()) >= 0.8:
                loop_part_points = cand
                break
        if loop_part_points is None:
            continue

        # reference points: source positions embedded in r-1 dims, plus small
        # components along the fresh coordinates only (quadratic Gram damage)
        ref_points = np.zeros((tgt_m.m, r - 1))
        init_points = np.zeros((tgt_m.m, r - 1))
        for k, part in enumerate(tgt_m.parts):
            bases = {base_part[e] for e in part if base_part[e] is not None}
            if bases:
                b = next(iter(bases))
                base = np.zeros(r - 1)
                base[: config.r - 1] = src_pts[src_m.parts[b][0] - 1]
                if r > config.r:
                    base[config.r - 1 :] = beta * rng.standard_normal(r - config.r)
                ref_points[k] = _retract(base)
                split = alpha * rng.standard_normal(r - 1) if len(siblings[b]) > 1 else 0.0
                init_points[k] = _retract(base + split)
            else:
                ref_points[k] = init_points[k] = loop_part_points[new_loop_parts.index(k)]
        if not _points_well_separated(init_points, gap=min(1e-3, alpha / 10)):
            continue

        lam = np.zeros(n)
        pts_init = np.zeros((n, r - 1))
        pts_ref = np.zeros((n, r - 1))
        for k, part in enumerate(tgt_m.parts):
            for e in part:
                pts_init[e - 1] = init_points[k]
                pts_ref[e - 1] = ref_points[k]
                if base_part[e] is not None:
                    lam[e - 1] = src_lam[e - 1]
                else:
                    lam[e - 1] = sigma_t[e] * eta * float(np.exp(rng.uniform(-0.2, 0.0)))
        for e in tgt_m.loops:
            pts_init[e - 1] = pts_ref[e - 1] = _unit_vectors(rng, 1, r - 1)[0]

        G_ref = np.outer(lam, lam) * (1.0 - pts_ref @ pts_ref.T)
        cand = _polish_to_goal(target, r, lam, pts_init, init_points, G_ref, src_m, rho, sigma_t)
        if cand is None:
            continue
        new_config = _config(n, r, cand[0], cand[1], seed)
        Gn = gram(new_config)
        dist = float(np.max(np.abs(Gn.to_array() - a0)))
        if dist > eps:
            continue
        if not _label_matches(Gn, target, r):
            continue
        return new_config
    raise SamplingError("perturbation failed to land in the target stratum")


def _polish_to_goal(target, r, lam, pts, part_points, G_ref, src_m, rho, sigma_t):
    """Gauss-Newton pull of the candidate Gram toward the goal matrix:
    reference values off the splits and +-rho on split pairs.  The reference
    already carries the rank-raising components, so the polish cannot gain
    by flattening them."""
    P = target.matroid
    n = P.n
    pairs = []
    goals = []
    lam_init = lam.copy()
    pts_init = pts.copy()
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            ka, kb = P.part_index.get(a), P.part_index.get(b)
            if ka is None or kb is None or ka == kb:
                continue
            sa, sb = src_m.part_index.get(a), src_m.part_index.get(b)
            if sa is not None and sb is not None and sa == sb:
                goals.append(sigma_t[a] * sigma_t[b] * rho)  # split pair
            else:
                goals.append(G_ref[a - 1, b - 1])
            pairs.append((a - 1, b - 1))
    goals = np.array(goals)

    charts = [(_tangent_basis(part_points[k]) if r > 2 else None, part_points[k].copy()) for k in range(P.m)]
    k_pt = r - 2
    non_loops = P.non_loops
    dim_theta = P.m * k_pt + len(non_loops)

    def build(theta):
        pp = np.zeros_like(part_points)
        for k in range(P.m):
            U, x0 = charts[k]
            if k_pt:
                pp[k] = _retract(x0 + U @ theta[k * k_pt : (k + 1) * k_pt])
            else:
                pp[k] = x0
        lam2 = lam_init.copy()
        for idx, e in enumerate(non_loops):
            lam2[e - 1] = theta[P.m * k_pt + idx]
        pts2 = pts_init.copy()
        for k, part in enumerate(P.parts):
            for e in part:
                pts2[e - 1] = pp[k]
        return lam2, pts2

    def residual(theta):
        lam2, pts2 = build(theta)
        G = np.outer(lam2, lam2) * (1.0 - pts2 @ pts2.T)
        return np.array([G[a, b] for a, b in pairs]) - goals

    theta = np.zeros(dim_theta)
    theta[P.m * k_pt :] = [lam_init[e - 1] for e in non_loops]
    res = residual(theta)
    best = float(np.max(np.abs(res)))
    for _ in range(MAX_NEWTON):
        if best <= rho * 1e-3:
            break
        J = _jacobian(residual, theta, len(pairs))
        step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        scale = 1.0
        improved = False
        for _ in range(20):
            cand = theta + scale * step
            cres = residual(cand)
            cmax = float(np.max(np.abs(cres)))
            if cmax < best:
                theta, res, best = cand, cres, cmax
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    lam2, pts2 = build(theta)
    return lam2, pts2
