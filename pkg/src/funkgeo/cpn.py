"""Complex projective space CP^n in homogeneous coordinates.

The Fubini-Study metric is scaled so that ``d(p, q) = 2 arccos |<p, q>|``.
Projective lines are then round unit 2-spheres, shortest closed geodesics
have length ``2 pi``, and the diameter and injectivity radius are both
``pi``. A point at distance ``pi`` from ``p`` is Hermitian-orthogonal to it.

Points are stored as unit representatives; every operation is invariant
under multiplying a representative by a unit complex phase.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GeometryError",
    "ProjPoint",
    "ProjLine",
    "CPGeodesic",
    "Ball",
    "fs_distance",
    "geodesic_through",
    "line_through",
    "antipode_in_line",
    "perpendicular_line_at",
    "remark31_residual",
    "avoiding_line",
    "line_distance",
    "sampled_line_distance",
    "geodesic_min_distance",
    "sampled_geodesic_min_distance",
    "sample_points",
    "sample_geodesics",
    "geodesic_integral",
    "bloch_map",
    "random_unitary",
]

POINT_TOL = 1e-9


class GeometryError(ValueError):
    """Invalid geometric input. ``code`` names the failure for callers and reports."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _hermitian(a, b):
    return np.vdot(a, b)


def _normalize(v):
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n == 0:
        raise GeometryError("degenerate", "cannot normalize a zero or non-finite vector")
    return v / n


def _orth_against(v, p):
    """Unit vector along the component of ``v`` orthogonal to unit ``p``.

    Two Gram-Schmidt passes keep the result orthogonal to rounding level
    even when ``v`` is nearly parallel to ``p``.
    """
    for _ in range(2):
        v = _normalize(v - _hermitian(p, v) * p)
    return v


@dataclass(frozen=True, eq=False)
class ProjPoint:
    rep: np.ndarray

    def __post_init__(self):
        rep = _normalize(self.rep)
        if rep.ndim != 1 or rep.size < 2:
            raise GeometryError("dimension", "a point of CP^n needs n + 1 >= 2 coordinates")
        object.__setattr__(self, "rep", rep)

    @property
    def n(self) -> int:
        return self.rep.size - 1

    def equiv(self, other: "ProjPoint", tol: float = POINT_TOL) -> bool:
        return fs_distance(self, other) <= tol

    def canonical(self, tol: float = 1e-12) -> np.ndarray:
        """Representative whose first non-negligible component is real positive."""
        k = int(np.flatnonzero(np.abs(self.rep) > tol)[0])
        z = self.rep[k]
        c = self.rep * (abs(z) / z)
        c[k] = abs(z)
        return c

    def interleaved(self) -> list:
        """Canonical representative as ``[re0, im0, re1, im1, ...]``."""
        c = self.canonical()
        return np.column_stack([c.real, c.imag]).ravel().tolist()

    def transform(self, U) -> "ProjPoint":
        return ProjPoint(np.asarray(U) @ self.rep)


def fs_distance(p: ProjPoint, q: ProjPoint) -> float:
    """Fubini-Study distance in ``[0, pi]``.

    Equal to ``2 arccos |<p, q>|``; evaluated as ``2 atan2(sin, cos)`` of the
    half-angle so that it stays accurate near 0 and near ``pi``.
    """
    c = _hermitian(p.rep, q.rep)
    sin_half = np.linalg.norm(q.rep - c * p.rep)
    return float(2.0 * np.arctan2(sin_half, abs(c)))


@dataclass(frozen=True, eq=False)
class ProjLine:
    """A projective line: the span of two Hermitian-orthonormal vectors."""

    frame: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.frame, dtype=complex)
        if F.ndim != 2 or F.shape[0] != 2:
            raise GeometryError("dimension", "a line frame is a (2, n+1) array")
        if np.abs(F.conj() @ F.T - np.eye(2)).max() > 1e-12:
            raise GeometryError("frame", "line frame is not Hermitian-orthonormal")
        object.__setattr__(self, "frame", F)

    @property
    def n(self) -> int:
        return self.frame.shape[1] - 1

    def coefficients(self, x) -> np.ndarray:
        v = x.rep if isinstance(x, ProjPoint) else np.asarray(x)
        return self.frame.conj() @ v

    def residual(self, x) -> float:
        """Norm of the component of ``x`` orthogonal to the line's span."""
        v = x.rep if isinstance(x, ProjPoint) else np.asarray(x)
        return float(np.linalg.norm(v - self.frame.T @ self.coefficients(v)))

    def contains(self, x, tol: float = POINT_TOL) -> bool:
        return self.residual(x) <= tol

    def point(self, a, b) -> ProjPoint:
        return ProjPoint(a * self.frame[0] + b * self.frame[1])

    def sample(self, count: int) -> np.ndarray:
        """Nearly uniform unit representatives on the line, shape ``(count, n+1)``.

        The line is a round 2-sphere; nodes come from a Fibonacci lattice on
        it, pulled back through the Bloch map.
        """
        k = np.arange(count) + 0.5
        cos_theta = 1.0 - 2.0 * k / count
        phi = np.pi * (1.0 + np.sqrt(5.0)) * k
        theta = np.arccos(cos_theta)
        a = np.cos(theta / 2)
        b = np.sin(theta / 2) * np.exp(1j * phi)
        return np.outer(a, self.frame[0]) + np.outer(b, self.frame[1])


@dataclass(frozen=True, eq=False)
class CPGeodesic:
    """Unit-speed closed geodesic ``t -> [cos(t/2) base + sin(t/2) w]``, ``t in [0, 2 pi)``."""

    base: ProjPoint
    direction: np.ndarray

    def __post_init__(self):
        w = _normalize(self.direction)
        if w.shape != self.base.rep.shape:
            raise GeometryError("dimension", "direction and base differ in dimension")
        if abs(_hermitian(self.base.rep, w)) > 1e-12:
            raise GeometryError("horizontal", "direction is not Hermitian-orthogonal to base")
        object.__setattr__(self, "direction", w)

    @property
    def n(self) -> int:
        return self.base.n

    def lift(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return (np.multiply.outer(np.cos(t / 2), self.base.rep)
                + np.multiply.outer(np.sin(t / 2), self.direction))

    def point(self, t: float) -> ProjPoint:
        return ProjPoint(self.lift(t))

    def line(self) -> "ProjLine":
        return ProjLine(np.stack([self.base.rep, self.direction]))

    def transform(self, U) -> "CPGeodesic":
        U = np.asarray(U)
        return CPGeodesic(ProjPoint(U @ self.base.rep), U @ self.direction)


@dataclass(frozen=True, eq=False)
class Ball:
    center: ProjPoint
    radius: float

    def __post_init__(self):
        if not 0 < self.radius < np.pi:
            raise GeometryError("radius", f"ball radius must lie in (0, pi), got {self.radius}")


def _check_distinct(p, q, what):
    if p.n != q.n:
        raise GeometryError("dimension", "points live in different projective spaces")
    if fs_distance(p, q) <= POINT_TOL:
        raise GeometryError("coincident", f"{what} needs two distinct points")


def geodesic_through(p: ProjPoint, q: ProjPoint) -> CPGeodesic:
    """The unique shortest geodesic with ``gamma(0) = p`` and ``gamma(d(p, q)) = q``.

    Rejects coincident points and antipodal points (``d = pi``), for which the
    shortest geodesic is not unique.
    """
    _check_distinct(p, q, "geodesic_through")
    d = fs_distance(p, q)
    if np.pi - d <= POINT_TOL:
        raise GeometryError("antipodal", "shortest geodesic between antipodal points is not unique")
    c = _hermitian(p.rep, q.rep)
    return CPGeodesic(p, _orth_against(q.rep * (abs(c) / c), p.rep))


def line_through(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """The unique projective line containing two distinct points."""
    _check_distinct(p, q, "line_through")
    return ProjLine(np.stack([p.rep, _orth_against(q.rep, p.rep)]))


def antipode_in_line(L: ProjLine, x: ProjPoint) -> ProjPoint:
    """The point of ``L`` Hermitian-orthogonal to ``x`` (at distance ``pi``)."""
    if not L.contains(x):
        raise GeometryError("not_on_line", f"point is off the line (residual {L.residual(x):.3g})")
    c1, c2 = L.coefficients(x)
    return L.point(-np.conj(c2), np.conj(c1))


def _orthogonal_direction(vectors, n, rng=None):
    """A unit vector Hermitian-orthogonal to all ``vectors``.

    Without ``rng`` this is the lowest-index coordinate direction with a
    well-conditioned orthogonal residual; with ``rng`` it is a uniformly
    random unit vector of the orthogonal complement.
    """
    Q, _ = np.linalg.qr(np.array(vectors, dtype=complex).T)
    k = Q.shape[1]
    if k >= n + 1:
        raise GeometryError("dimension", "no orthogonal direction exists")

    def project(v):
        return v - Q @ (Q.conj().T @ v)

    if rng is not None:
        for _ in range(16):
            v = project(rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
            if np.linalg.norm(v) > 1e-6:
                break
    else:
        # The squared residuals of the coordinate axes sum to n + 1 - k, so
        # some axis reaches half the average.
        floor = 0.5 * (n + 1 - k) / (n + 1)
        for i in range(n + 1):
            e = np.zeros(n + 1, dtype=complex)
            e[i] = 1.0
            v = project(e)
            if np.vdot(v, v).real >= floor:
                break
    v = _normalize(v)
    return _normalize(project(v))


def perpendicular_line_at(L: ProjLine, q: ProjPoint, rng=None) -> ProjLine:
    """A projective line meeting ``L`` orthogonally at ``q``.

    Its second frame vector is orthogonal to all of ``L``; the choice is
    deterministic unless ``rng`` is given.
    """
    if L.n < 2:
        raise GeometryError("dimension", "CP^1 has no pair of perpendicular lines")
    if not L.contains(q):
        raise GeometryError("not_on_line", f"point is off the line (residual {L.residual(q):.3g})")
    v = _orthogonal_direction(L.frame, L.n, rng)
    return ProjLine(np.stack([q.rep, v]))


def remark31_residual(p: ProjPoint, P: ProjLine, rng=None) -> float:
    """``|<r, p>|`` for the triple-antipode construction starting at ``p`` on ``P``.

    q is the antipode of p on P, Q meets P perpendicularly at q, and r is the
    antipode of q on Q. The residual vanishes exactly when r and p are
    antipodal on the line through them.
    """
    if P.n < 2:
        raise GeometryError("dimension", "the construction needs n >= 2")
    q = antipode_in_line(P, p)
    Q = perpendicular_line_at(P, q, rng)
    r = antipode_in_line(Q, q)
    return float(abs(_hermitian(r.rep, p.rep)))


def avoiding_line(p: ProjPoint, q: ProjPoint, rng=None) -> ProjLine:
    """A projective line through ``q`` that misses the open ball ``B_s(p)``, ``s = d(p, q)``.

    For ``s = pi`` the line is any line through ``q`` inside the cut locus of
    ``p``. Otherwise the geodesic from ``q`` through ``p`` is continued to its
    first cut point ``p_hat`` (at parameter ``pi``), and the line is taken
    inside the cut locus of ``p_hat``.
    """
    if p.n < 2:
        raise GeometryError("dimension", "CP^1 is a sphere; no avoiding line exists")
    _check_distinct(p, q, "avoiding_line")
    s = fs_distance(p, q)
    if np.pi - s <= POINT_TOL:
        v = _orthogonal_direction([p.rep, q.rep], p.n, rng)
    else:
        p_hat = geodesic_through(q, p).direction
        v = _orthogonal_direction([q.rep, p_hat], p.n, rng)
    return ProjLine(np.stack([q.rep, v]))


def line_distance(p: ProjPoint, L: ProjLine) -> float:
    """Closed-form ``min_{x in L} d(p, x)`` from the projection of ``p`` onto ``L``."""
    proj = np.linalg.norm(L.coefficients(p))
    return float(2.0 * np.arctan2(L.residual(p), proj))


def _distances_to(p: ProjPoint, reps) -> np.ndarray:
    reps = reps / np.linalg.norm(reps, axis=-1, keepdims=True)
    c = reps.conj() @ p.rep
    sin_half = np.linalg.norm(reps - np.outer(c.conj(), p.rep), axis=-1)
    return 2.0 * np.arctan2(sin_half, np.abs(c))


def sampled_line_distance(p: ProjPoint, L: ProjLine, count: int = 10_000) -> float:
    return float(_distances_to(p, L.sample(count)).min())


def geodesic_min_distance(p: ProjPoint, geo: CPGeodesic) -> float:
    """Closed-form ``min_t d(p, gamma(t))``.

    With ``a = <base, p>`` and ``b = <w, p>`` split into real and imaginary
    parts ``x``, ``y`` in R^2, ``max_t |<gamma(t), p>|^2`` is the top
    eigenvalue of ``x x^T + y y^T``.
    """
    ab = np.array([_hermitian(geo.base.rep, p.rep), _hermitian(geo.direction, p.rep)])
    M = np.outer(ab.real, ab.real) + np.outer(ab.imag, ab.imag)
    top = np.linalg.eigvalsh(M)[-1]
    return float(2.0 * np.arccos(np.clip(np.sqrt(max(top, 0.0)), 0.0, 1.0)))


def sampled_geodesic_min_distance(p: ProjPoint, geo: CPGeodesic, count: int = 512) -> float:
    t = 2.0 * np.pi * np.arange(count) / count
    return float(_distances_to(p, geo.lift(t)).min())


def _complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def sample_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Unit representatives of unitary-invariant random points, shape ``(count, n+1)``."""
    z = _complex_gaussian(rng, (count, n + 1))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_geodesics(n: int, n_geo: int, rng: np.random.Generator) -> list:
    """Random closed geodesics with a unitary-invariant distribution.

    Base points are normalized complex Gaussians; directions are normalized
    complex Gaussians projected onto the orthogonal complement of the base.
    """
    if n < 1 or n_geo < 1:
        raise ValueError("need n >= 1 and n_geo >= 1")
    base = sample_points(n, n_geo, rng)
    z = _complex_gaussian(rng, (n_geo, n + 1))
    z -= np.einsum("ij,ij->i", base.conj(), z)[:, None] * base
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return [CPGeodesic(ProjPoint(b), w) for b, w in zip(base, z)]


def geodesic_integral(f, geo: CPGeodesic, K: int = 256) -> float:
    """Trapezoidal arc-length integral of ``f`` over a closed geodesic.

    ``f`` receives an ``(K, n+1)`` array of unit representatives and must be
    phase invariant.
    """
    if K < 4:
        raise ValueError("quadrature count K must be at least 4")
    t = 2.0 * np.pi * np.arange(K) / K
    return float(np.sum(f(geo.lift(t))) * (2.0 * np.pi / K))


def bloch_map(p: ProjPoint) -> np.ndarray:
    """Isometry CP^1 -> S^2, ``[z0 : z1] -> (2 Re(z0* z1), 2 Im(z0* z1), |z0|^2 - |z1|^2)``."""
    if p.n != 1:
        raise GeometryError("dimension", "the Bloch map is defined on CP^1 only")
    return _bloch(p.rep)


def _bloch(reps):
    reps = np.asarray(reps)
    z0, z1 = reps[..., 0], reps[..., 1]
    c = np.conj(z0) * z1
    return np.stack([2 * c.real, 2 * c.imag, np.abs(z0) ** 2 - np.abs(z1) ** 2], axis=-1)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary matrix (QR of a complex Gaussian with phase fix)."""
    z = _complex_gaussian(rng, (dim, dim)) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
