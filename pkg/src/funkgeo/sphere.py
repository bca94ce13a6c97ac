"""Funk transform on the unit sphere S^2.

Functions are expanded in real spherical harmonics ``Y_{l,m}`` orthonormal
for the surface measure of total mass ``4 pi``. Index ``l*l + l + m`` holds
``Y_{l,m}``; ``m > 0`` carries ``cos(m phi)`` and ``m < 0`` carries
``sin(|m| phi)``.

The transform integrates a function over great circles. As a function of
the circle's pole it multiplies the degree-``l`` block by ``2 pi P_l(0)``,
which vanishes exactly for odd ``l``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator import (DEFAULT_TOL_RATIO, KernelAnalysis, TransformOperator,
                       kernel_analysis)

__all__ = [
    "LMAX_SUPPORTED",
    "DEFAULT_QUADRATURE",
    "unit_vector",
    "GreatCircle",
    "HarmonicBasis",
    "SphereFunction",
    "random_circles",
    "circle_points",
    "circle_integral",
    "funk_hecke_eigenvalue",
    "transform_as_function",
    "assemble_operator",
    "kernel_analysis",
    "invert_even",
    "odd_degree_indices",
]

LMAX_SUPPORTED = 32
DEFAULT_QUADRATURE = 256


def unit_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0:
        raise ValueError("cannot normalize a zero or non-finite vector")
    return v / n


@dataclass(frozen=True, eq=False)
class GreatCircle:
    """The great circle ``{x : <x, pole> = 0}``.

    The pole is normalized on construction and its sign is canonicalized
    (largest-magnitude component positive), so ``pole`` and ``-pole`` give
    the same circle with the same quadrature nodes.
    """

    pole: np.ndarray

    def __post_init__(self):
        p = unit_vector(self.pole)
        if p[np.argmax(np.abs(p))] < 0:
            p = -p
        object.__setattr__(self, "pole", p)

    def frame(self):
        p = self.pole
        e = np.zeros(3)
        e[np.argmin(np.abs(p))] = 1.0
        u = e - (e @ p) * p
        u /= np.linalg.norm(u)
        return u, np.cross(p, u)


def random_circles(count: int, rng: np.random.Generator) -> list:
    """Great circles with poles uniform on S^2 (normalized Gaussians)."""
    return [GreatCircle(v) for v in rng.standard_normal((count, 3))]


def circle_points(circle: GreatCircle, K: int) -> np.ndarray:
    """``K`` equispaced arc-length nodes on the circle, shape ``(K, 3)``."""
    u, v = circle.frame()
    theta = 2.0 * np.pi * np.arange(K) / K
    return np.outer(np.cos(theta), u) + np.outer(np.sin(theta), v)


def circle_integral(f, circle: GreatCircle, K: int = DEFAULT_QUADRATURE) -> float:
    """Trapezoidal arc-length integral of ``f`` over a great circle.

    ``f`` takes an ``(N, 3)`` array of points and returns ``N`` values. The
    rule is exact for trigonometric polynomials of degree below ``K``.
    """
    if K < 4:
        raise ValueError("quadrature count K must be at least 4")
    values = np.asarray(f(circle_points(circle, K)))
    return float(values.sum() * (2.0 * np.pi / K))


class HarmonicBasis:
    """Real orthonormal spherical harmonics up to degree ``lmax``."""

    def __init__(self, lmax: int):
        if not 0 <= lmax <= LMAX_SUPPORTED:
            raise ValueError(f"lmax must be in [0, {LMAX_SUPPORTED}], got {lmax}")
        self.lmax = int(lmax)
        self.degrees = np.concatenate([np.full(2 * l + 1, l) for l in range(lmax + 1)])
        self.orders = np.concatenate([np.arange(-l, l + 1) for l in range(lmax + 1)])

    @property
    def size(self) -> int:
        return (self.lmax + 1) ** 2

    def __len__(self):
        return self.size

    @staticmethod
    def index(l: int, m: int) -> int:
        return l * l + l + m

    def __call__(self, points) -> np.ndarray:
        return self.evaluate(points)

    def evaluate(self, points) -> np.ndarray:
        """Values of all basis functions at unit vectors, shape ``(N, size)``.

        Uses the fully normalized associated Legendre recurrence with the
        factor ``sin(theta)^m`` folded into ``(x + i y)^m``, so the result is
        a polynomial in the Cartesian coordinates with no pole singularity.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        L = self.lmax
        out = np.empty((pts.shape[0], self.size))
        w = np.ones(pts.shape[0], dtype=complex)
        xy = x + 1j * y
        qmm = np.full(pts.shape[0], 1.0 / np.sqrt(4.0 * np.pi))
        for m in range(L + 1):
            if m > 0:
                qmm = qmm * np.sqrt((2.0 * m + 1.0) / (2.0 * m))
                w = w * xy
            scale = 1.0 if m == 0 else np.sqrt(2.0)
            q_prev, q = None, qmm
            for l in range(m, L + 1):
                if l == m + 1:
                    q_prev, q = q, np.sqrt(2.0 * m + 3.0) * z * q
                elif l > m + 1:
                    a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
                    b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
                    q_prev, q = q, a * (z * q - b * q_prev)
                if m == 0:
                    out[:, self.index(l, 0)] = q
                else:
                    out[:, self.index(l, m)] = scale * q * w.real
                    out[:, self.index(l, -m)] = scale * q * w.imag
        return out


@dataclass(frozen=True, eq=False)
class SphereFunction:
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        L = int(round(np.sqrt(c.size))) - 1
        if c.ndim != 1 or (L + 1) ** 2 != c.size:
            raise ValueError(f"coefficient count {c.size} is not a square (lmax+1)^2")
        object.__setattr__(self, "coefficients", c)

    @property
    def lmax(self) -> int:
        return int(round(np.sqrt(self.coefficients.size))) - 1

    @property
    def basis(self) -> HarmonicBasis:
        return HarmonicBasis(self.lmax)

    def __call__(self, points) -> np.ndarray:
        return self.basis.evaluate(points) @ self.coefficients


def odd_degree_indices(lmax: int) -> np.ndarray:
    return np.flatnonzero(HarmonicBasis(lmax).degrees % 2 == 1)


def funk_hecke_eigenvalue(l: int) -> float:
    """``2 pi P_l(0)``: zero for odd ``l``, ``2 pi (-1)^(l/2) (l-1)!!/l!!`` for even ``l``."""
    if l < 0:
        raise ValueError("degree must be nonnegative")
    if l % 2:
        return 0.0
    value = 2.0 * np.pi
    for k in range(1, l // 2 + 1):
        value *= -(2.0 * k - 1.0) / (2.0 * k)
    return value


def _eigenvalues(lmax):
    return np.array([funk_hecke_eigenvalue(l) for l in HarmonicBasis(lmax).degrees])


def transform_as_function(f: SphereFunction) -> SphereFunction:
    """Transform read as a function of the pole: scale degree ``l`` by ``2 pi P_l(0)``."""
    return SphereFunction(f.coefficients * _eigenvalues(f.lmax))


def assemble_operator(basis: HarmonicBasis, circles, K: int = DEFAULT_QUADRATURE) -> TransformOperator:
    """Matrix of great-circle integrals, row ``i`` for circle ``i``."""
    if K < 2 * basis.lmax + 8:
        raise ValueError(f"K={K} too small for lmax={basis.lmax}; need K >= 2*lmax + 8")
    circles = list(circles)
    if not circles:
        raise ValueError("need at least one circle")
    pts = np.concatenate([circle_points(c, K) for c in circles])
    vals = basis.evaluate(pts).reshape(len(circles), K, basis.size)
    matrix = vals.sum(axis=1) * (2.0 * np.pi / K)
    return TransformOperator(matrix, {"space": "S2", "lmax": basis.lmax,
                                      "n_circles": len(circles), "K": K})


def invert_even(fhat: SphereFunction, odd_tol: float = 1e-8) -> SphereFunction:
    """The unique even function whose transform is ``fhat``.

    Raises ``ValueError`` if ``fhat`` carries odd-degree energy above
    ``odd_tol`` relative to its norm, since no preimage exists.
    """
    c = fhat.coefficients
    odd = odd_degree_indices(fhat.lmax)
    norm = np.linalg.norm(c)
    if norm > 0 and np.linalg.norm(c[odd]) > odd_tol * norm:
        raise ValueError("fhat has odd-degree energy; it is not in the range of the transform")
    lam = _eigenvalues(fhat.lmax)
    out = np.zeros_like(c)
    even = lam != 0
    out[even] = c[even] / lam[even]
    return SphereFunction(out)
