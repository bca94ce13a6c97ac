"""Band-limited Funk transform experiments on CP^n.

Functions of bidegree ``(D, D)`` are spanned by the phase-invariant
monomials ``z^a conj(z)^b`` with ``|a| = |b| = D`` restricted to unit
representatives. Their inner products against the normalized measure on the
unit sphere of C^(n+1) are known in closed form,

    int z^c conj(z)^c' dsigma = delta(c, c') n! c! / (n + |c|)!,

so the basis is orthonormalized exactly (symmetric orthonormalization of
the Gram matrix) rather than by quadrature.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from . import cpn
from .cpn import Ball, ProjPoint
from .operator import (DEFAULT_TOL_RATIO, REQUIRED_GAP, TransformOperator,
                       kernel_analysis, least_squares_invert,
                       rank_revealing_spectrum)

__all__ = [
    "BASIS_CAP",
    "CPBasis",
    "sphere_moment",
    "build_cp_basis",
    "assemble_cp_operator",
    "default_quadrature",
    "RankResult",
    "rank_experiment",
    "injectivity_experiment",
    "SupportReport",
    "support_experiment",
    "ball_points",
    "least_squares_invert",
    "rank_revealing_spectrum",
]

BASIS_CAP = 2500
GRAM_COND_MAX = 1e12
AVOID_SAMPLES = 512


def _multi_indices(nvars, degree):
    """Exponent vectors of total ``degree`` in ``nvars`` variables, lexicographic."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def sphere_moment(n: int, c, c_prime) -> float:
    """``int z^c conj(z)^c' dsigma`` over the unit sphere of C^(n+1), normalized measure."""
    if tuple(c) != tuple(c_prime):
        return 0.0
    num = factorial(n)
    for k in c:
        num *= factorial(k)
    return num / factorial(n + sum(c))


@dataclass(frozen=True, eq=False)
class CPBasis:
    """Orthonormal basis of bidegree-``(D, D)`` functions on CP^n.

    ``exponents`` lists the pairs ``(a, b)`` of the generating monomials and
    ``transform`` maps monomial coordinates to the orthonormal functions:
    ``phi_k = sum_j m_j transform[j, k]``.
    """

    n: int
    degree: int
    exponents: tuple
    gram: np.ndarray
    transform: np.ndarray

    @property
    def size(self) -> int:
        return self.transform.shape[1]

    def __len__(self):
        return self.size

    def monomials(self, reps) -> np.ndarray:
        z = np.atleast_2d(np.asarray(reps, dtype=complex))
        single = _multi_indices(self.n + 1, self.degree)
        powers = z[None, :, :] ** np.arange(self.degree + 1)[:, None, None]
        cols = np.arange(self.n + 1)
        za = np.stack([np.prod(powers[list(a), :, cols], axis=0) for a in single], axis=1)
        return (za[:, :, None] * za.conj()[:, None, :]).reshape(z.shape[0], -1)

    def __call__(self, reps) -> np.ndarray:
        return self.evaluate(reps)

    def evaluate(self, reps) -> np.ndarray:
        """Basis values at unit representatives, shape ``(N, size)``."""
        return self.monomials(reps) @ self.transform

    def constant_coefficients(self) -> np.ndarray:
        """Coefficients of the constant function 1 (which is ``(sum |z_i|^2)^D``)."""
        single = _multi_indices(self.n + 1, self.degree)
        mono = np.zeros(len(single) ** 2)
        for i, a in enumerate(single):
            mult = factorial(self.degree)
            for k in a:
                mult //= factorial(k)
            mono[i * len(single) + i] = mult
        return np.linalg.solve(self.transform, mono)


def build_cp_basis(n: int, D: int) -> CPBasis:
    if n < 1 or D < 0:
        raise ValueError(f"need n >= 1 and D >= 0, got n={n}, D={D}")
    size = comb(D + n, n) ** 2
    if size > BASIS_CAP:
        raise ValueError(f"basis size {size} exceeds the cap {BASIS_CAP}")
    single = _multi_indices(n + 1, D)
    pairs = [(a, b) for a in single for b in single]
    # <m_(a,b), m_(a',b')> = int z^(a+b') conj(z)^(b+a')
    G = np.empty((size, size))
    for j, (a, b) in enumerate(pairs):
        for k, (a2, b2) in enumerate(pairs):
            G[j, k] = sphere_moment(n, np.add(a, b2), np.add(b, a2))
    w, V = np.linalg.eigh(G)
    if w[0] <= 0 or w[-1] / w[0] > GRAM_COND_MAX:
        raise ValueError(f"Gram matrix is numerically singular (eigenvalues {w[0]:.3g}..{w[-1]:.3g})")
    T = (V / np.sqrt(w)) @ V.T
    return CPBasis(n, D, tuple(pairs), G, T)


def default_quadrature(D: int) -> int:
    return max(8 * D + 8, 64)


def _lift_all(geodesics, K):
    t = 2.0 * np.pi * np.arange(K) / K
    c, s = np.cos(t / 2), np.sin(t / 2)
    base = np.array([g.base.rep for g in geodesics])
    w = np.array([g.direction for g in geodesics])
    return c[None, :, None] * base[:, None, :] + s[None, :, None] * w[:, None, :]


def assemble_cp_operator(basis: CPBasis, geodesics, K: int | None = None,
                         provenance: dict | None = None) -> TransformOperator:
    """Geodesic integrals of every basis function, one row per geodesic."""
    if K is None:
        K = default_quadrature(basis.degree)
    if K < 8 * basis.degree + 8:
        raise ValueError(f"K={K} too small for D={basis.degree}; need K >= 8D + 8")
    geodesics = list(geodesics)
    if not geodesics:
        raise ValueError("need at least one geodesic")
    pts = _lift_all(geodesics, K)
    vals = basis.evaluate(pts.reshape(-1, basis.n + 1)).reshape(len(geodesics), K, basis.size)
    info = {"space": f"CP{basis.n}", "n": basis.n, "D": basis.degree,
            "n_geo": len(geodesics), "K": K}
    info.update(provenance or {})
    return TransformOperator(vals.sum(axis=1) * (2.0 * np.pi / K), info)


@dataclass
class RankResult:
    n: int
    degree: int
    basis_dim: int
    n_geo: int
    K: int
    seed: int
    rank: int
    singular_values: np.ndarray
    gap: float
    separated: bool
    near_kernel: np.ndarray | None = field(default=None, repr=False)
    operator: TransformOperator | None = field(default=None, repr=False)

    @property
    def kernel_dim(self) -> int:
        return self.basis_dim - self.rank

    @property
    def full_rank(self) -> bool:
        return self.rank == self.basis_dim

    @property
    def condition_ratio(self) -> float:
        s = self.singular_values
        return float(s[-1] / s[0]) if s.size == self.basis_dim and s[0] > 0 else 0.0


def rank_experiment(n: int, D: int, n_geo: int, seed: int,
                    tol_ratio: float = DEFAULT_TOL_RATIO, K: int | None = None) -> RankResult:
    """Numerical rank of the operator on random geodesics; any ``n >= 1``.

    CP^1 is the round 2-sphere, so ``n = 1`` runs the sphere case through
    exactly the same code.
    """
    basis = build_cp_basis(n, D)
    K = default_quadrature(D) if K is None else K
    rng = np.random.default_rng(seed)
    geos = cpn.sample_geodesics(n, n_geo, rng)
    op = assemble_cp_operator(basis, geos, K, {"seed": seed})
    ka = kernel_analysis(op, tol_ratio)
    near = None
    if ka.rank < basis.size:
        near = ka.kernel[:, 0] if ka.kernel_dim else None
    return RankResult(n, D, basis.size, n_geo, K, seed, ka.rank, ka.singular_values,
                      ka.gap, ka.separated, near, op)


def injectivity_experiment(n: int, D: int, n_geo: int, seed: int,
                           tol_ratio: float = DEFAULT_TOL_RATIO, K: int | None = None) -> RankResult:
    """Full-column-rank check of the band-limited transform on CP^n, ``n >= 2``.

    A rank deficiency is reported through ``full_rank`` and ``near_kernel``
    rather than raised.
    """
    if n < 2:
        raise ValueError("CP^1 is a sphere; the injectivity experiment needs n >= 2")
    size = comb(D + n, n) ** 2
    if n_geo < 2 * size:
        raise ValueError(f"need n_geo >= 2 * basis_dim = {2 * size}, got {n_geo}")
    return rank_experiment(n, D, n_geo, seed, tol_ratio, K)


# -- support experiment --------------------------------------------------------

def ball_points(center: ProjPoint, radius: float, count: int, rng) -> np.ndarray:
    """Unit representatives at distances in ``[0, radius]`` from ``center``."""
    n = center.n
    w = cpn.sample_points(n, count, rng)
    w -= (w @ center.rep.conj())[:, None] * center.rep[None, :]
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    rho = radius * np.sqrt(rng.uniform(size=count))
    return np.cos(rho / 2)[:, None] * center.rep[None, :] + np.sin(rho / 2)[:, None] * w


@dataclass
class SupportReport:
    ball: Ball
    seed: int
    n: int
    degree: int
    basis_dim: int
    n_geo_requested: int
    n_candidates: int
    n_avoiding_geodesics: int
    K: int
    margin: float
    singular_values: np.ndarray
    kernel_dim: int
    separated: bool
    outside_sup: list
    inside_sup: list
    global_sup: list

    @property
    def vacuous(self) -> bool:
        return self.kernel_dim == 0

    def concentrated(self, outside_tol: float = 5e-2, inside_min: float = 0.5) -> bool:
        """Every kernel function is small outside the enlarged ball and large inside it."""
        return all(o <= outside_tol for o in self.outside_sup) and \
            all(i >= inside_min for i in self.inside_sup)

    def to_json_dict(self) -> dict:
        return {
            "center": self.ball.center.interleaved(),
            "radius": self.ball.radius,
            "seed": self.seed,
            "n": self.n,
            "D": self.degree,
            "basis_dim": self.basis_dim,
            "n_geo": self.n_geo_requested,
            "n_candidates": self.n_candidates,
            "n_avoiding_geodesics": self.n_avoiding_geodesics,
            "K": self.K,
            "margin": self.margin,
            "singular_values": self.singular_values.tolist(),
            "kernel_dim": self.kernel_dim,
            "separated": self.separated,
            "outside_sup": list(self.outside_sup),
            "inside_sup": list(self.inside_sup),
            "global_sup": list(self.global_sup),
            "vacuous": self.vacuous,
        }


def support_experiment(n: int, D: int, ball: Ball, n_geo: int, seed: int,
                       margin: float = 0.3, tol_ratio: float = DEFAULT_TOL_RATIO,
                       K: int | None = None, grid: int = 4000) -> SupportReport:
    """Kernel of the transform restricted to geodesics that avoid a closed ball.

    Candidate geodesics are drawn in batches of ``n_geo`` (at most ten
    batches) and kept when their sampled distance to the ball's center
    exceeds the radius, until ``n_geo`` are kept. Each unit-norm kernel
    function is then evaluated on random points at distance at least
    ``radius + margin`` from the center (``outside_sup``), on points inside
    the closed ball (``inside_sup``) and on uniform points (``global_sup``).
    """
    if n < 2:
        raise ValueError("the support experiment needs n >= 2")
    if ball.center.n != n:
        raise ValueError("ball center lives in a different CP^n")
    basis = build_cp_basis(n, D)
    K = default_quadrature(D) if K is None else K
    rng = np.random.default_rng(seed)
    r = ball.radius
    kept, drawn = [], 0
    for _ in range(10):
        batch = cpn.sample_geodesics(n, n_geo, rng)
        drawn += len(batch)
        for g in batch:
            if len(kept) < n_geo and \
                    cpn.sampled_geodesic_min_distance(ball.center, g, AVOID_SAMPLES) > r:
                kept.append(g)
        if len(kept) >= n_geo:
            break
    if len(kept) < basis.size / 2:
        raise ValueError(f"only {len(kept)} of {drawn} geodesics avoid the ball; "
                         f"need at least {basis.size / 2}")
    op = assemble_cp_operator(basis, kept, K, {"seed": seed})
    ka = kernel_analysis(op, tol_ratio)

    grid_rng = np.random.default_rng([seed, 1])
    uniform = cpn.sample_points(n, grid, grid_rng)
    d = 2.0 * np.arccos(np.clip(np.abs(uniform @ ball.center.rep.conj()), 0.0, 1.0))
    outside = uniform[d >= r + margin]
    inside = ball_points(ball.center, r, max(grid // 4, 1), grid_rng)
    out_sup, in_sup, glob_sup = [], [], []
    for v in ka.kernel.T:
        out_sup.append(float(np.abs(basis.evaluate(outside) @ v).max()) if len(outside) else 0.0)
        in_sup.append(float(np.abs(basis.evaluate(inside) @ v).max()))
        glob_sup.append(float(np.abs(basis.evaluate(uniform) @ v).max()))
    return SupportReport(ball, seed, n, D, basis.size, n_geo, drawn, len(kept), K, margin,
                         ka.singular_values, ka.kernel_dim, ka.separated,
                         out_sup, in_sup, glob_sup)
