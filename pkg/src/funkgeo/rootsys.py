"""Irreducible (restricted) root systems and the dual-root lattice.

Root systems are realized in their standard Euclidean coordinates and then
rescaled so that the highest root ``delta`` has unit length, which matches the
normalization where the maximal sectional curvature of the symmetric space is
one. With this scale the dual vector ``X_alpha = 2*pi*alpha / <alpha, alpha>``
has length equal to the length of the closed geodesic ``t -> Exp(t X_alpha)``.

The module also carries a small table of compact rank-one and rank-two
symmetric spaces described by (root system, multiplicities).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = [
    "FAMILIES",
    "RootSystem",
    "SymmetricSpaceDescriptor",
    "LatticeVector",
    "PairingReport",
    "UnstableParityError",
    "build_root_system",
    "dual_vector",
    "odd_root_set",
    "lattice_basis",
    "in_dual_lattice",
    "midpoint_locus_dimension",
    "check_longest_root_pairing",
    "helgason_sphere_dimension",
    "make_descriptor",
    "sphere",
    "complex_projective",
    "quaternionic_projective",
    "cayley_plane",
    "complex_quadric",
    "descriptor_table",
]

FAMILIES = ("A", "B", "C", "D", "BC", "E6", "E7", "E8", "F4", "G2")

PARITY_TOL = 1e-9

_EXPECTED_COUNT = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "BC": lambda n: 2 * n * n + 2 * n,
    "E6": lambda n: 72,
    "E7": lambda n: 126,
    "E8": lambda n: 240,
    "F4": lambda n: 48,
    "G2": lambda n: 12,
}

_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "BC": 1}


class UnstableParityError(ValueError):
    """Raised when a parity decision sits too close to a rounding boundary."""


# -- standard realizations ---------------------------------------------------

def _signed_pairs(n):
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for si, sj in itertools.product((1.0, -1.0), repeat=2):
            v = np.zeros(n)
            v[i], v[j] = si, sj
            out.append(v)
    return out


def _signed_units(n, scale=1.0):
    out = []
    for i in range(n):
        for s in (1.0, -1.0):
            v = np.zeros(n)
            v[i] = s * scale
            out.append(v)
    return out


def _e8_roots():
    roots = _signed_pairs(8)
    for signs in itertools.product((0.5, -0.5), repeat=8):
        if sum(s < 0 for s in signs) % 2 == 0:
            roots.append(np.array(signs))
    return roots


def _ambient_roots(family, n):
    if family == "A":
        out = []
        for i, j in itertools.permutations(range(n + 1), 2):
            v = np.zeros(n + 1)
            v[i], v[j] = 1.0, -1.0
            out.append(v)
        return out
    if family == "B":
        return _signed_units(n) + _signed_pairs(n)
    if family == "C":
        return _signed_units(n, 2.0) + _signed_pairs(n)
    if family == "D":
        return _signed_pairs(n)
    if family == "BC":
        return _signed_units(n) + _signed_units(n, 2.0) + _signed_pairs(n)
    if family == "G2":
        short = _ambient_roots("A", 2)
        long_ = []
        for i in range(3):
            v = -np.ones(3)
            v[i] = 2.0
            long_ += [v, -v]
        return short + long_
    if family == "F4":
        roots = _signed_units(4) + _signed_pairs(4)
        roots += [np.array(s) for s in itertools.product((0.5, -0.5), repeat=4)]
        return roots
    if family == "E8":
        return _e8_roots()
    if family in ("E7", "E6"):
        # E7 and E6 as the centralizers of an A1 and an A2 inside E8.
        fixed = [np.full(8, 0.5)]
        if family == "E6":
            fixed.append(np.array([0, 0, 0, 0, 0, 0, -1.0, -1.0]))
        F = np.array(fixed)
        return [r for r in _e8_roots() if np.all(np.abs(F @ r) < 1e-12)]
    raise ValueError(f"unknown root system family {family!r}")


def _span_coordinates(vectors, rank):
    """Express vectors in an orthonormal basis of their span."""
    V = np.array(vectors)
    if V.shape[1] == rank:
        return V, None
    _, s, vt = np.linalg.svd(V, full_matrices=False)
    basis = vt[:rank]
    if s[rank - 1] < 1e-9 * s[0]:
        raise RuntimeError("root span has unexpected dimension")
    return V @ basis.T, basis


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A finite root system normalized so the highest root has unit norm.

    ``roots`` is an ``(N, rank)`` array. ``positive`` holds the indices of a
    positive system and ``highest`` the index of the highest root ``delta``
    for that ordering.
    """

    family: str
    rank: int
    roots: np.ndarray
    positive: tuple
    highest: int
    orbit_labels: tuple = field(repr=False)

    @property
    def delta(self) -> np.ndarray:
        return self.roots[self.highest]

    @property
    def positive_roots(self) -> np.ndarray:
        return self.roots[list(self.positive)]

    def __len__(self):
        return len(self.roots)

    def orbit(self, index: int) -> str:
        """Weyl orbit label ('long', 'medium' or 'short') of a root."""
        return self.orbit_labels[index]

    def index_of(self, vector, tol: float = 1e-9) -> int:
        d = np.linalg.norm(self.roots - np.asarray(vector, dtype=float), axis=1)
        i = int(np.argmin(d))
        if d[i] > tol:
            raise KeyError("vector is not a root")
        return i

    def contains(self, vector, tol: float = 1e-9) -> bool:
        d = np.linalg.norm(self.roots - np.asarray(vector, dtype=float), axis=1)
        return bool(d.min() <= tol)

    def reflect(self, vector, index: int) -> np.ndarray:
        a = self.roots[index]
        v = np.asarray(vector, dtype=float)
        return v - 2.0 * (v @ a) / (a @ a) * a

    def is_reflection_closed(self, tol: float = 1e-9) -> bool:
        for i in range(len(self.roots)):
            a = self.roots[i]
            images = self.roots - np.outer(2.0 * (self.roots @ a) / (a @ a), a)
            for img in images:
                if not self.contains(img, tol):
                    return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "roots": self.roots.tolist(),
            "positive": list(self.positive),
            "highest": self.highest,
        }


def _orbit_labels(roots):
    sq = np.round(np.einsum("ij,ij->i", roots, roots), 9)
    levels = sorted(set(sq.tolist()), reverse=True)
    names = {1: ["long"], 2: ["long", "short"], 3: ["long", "medium", "short"]}[len(levels)]
    lookup = dict(zip(levels, names))
    return tuple(lookup[s] for s in sq.tolist())


def _from_vectors(family, rank, vectors) -> RootSystem:
    roots, basis = _span_coordinates(vectors, rank)
    if basis is None:
        order = _ORDER_VECTOR(rank)
    else:
        order = _ORDER_VECTOR(basis.shape[1]) @ basis.T
    heights = roots @ order
    if np.min(np.abs(heights)) < 1e-9:
        raise RuntimeError("ordering vector is not regular")
    positive = tuple(int(i) for i in np.flatnonzero(heights > 0))
    highest = int(np.argmax(heights))
    roots = roots / np.linalg.norm(roots[highest])
    return RootSystem(family, rank, roots, positive, highest, _orbit_labels(roots))


def _ORDER_VECTOR(dim):
    # Distinct powers of two are regular for every standard realization here.
    return 2.0 ** np.arange(dim - 1, -1, -1)


def build_root_system(family: str, rank: int) -> RootSystem:
    """Build the root system of the given type in a standard realization.

    >>> len(build_root_system("B", 2))
    8
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if not isinstance(rank, (int, np.integer)) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    if family in _FIXED_RANK and rank != _FIXED_RANK[family]:
        raise ValueError(f"{family} requires rank {_FIXED_RANK[family]}, got {rank}")
    if family in _MIN_RANK and rank < _MIN_RANK[family]:
        raise ValueError(f"{family} requires rank >= {_MIN_RANK[family]}, got {rank}")
    rank = int(rank)
    vectors = _ambient_roots(family, rank)
    expected = _EXPECTED_COUNT[family](rank)
    if len(vectors) != expected:
        raise RuntimeError(f"{family}{rank}: built {len(vectors)} roots, expected {expected}")
    return _from_vectors(family, rank, vectors)


# -- dual lattice --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LatticeVector:
    coordinates: np.ndarray
    source_root: int
    length: float


def _dual(alpha):
    return 2.0 * np.pi * alpha / (alpha @ alpha)


def dual_vector(rs: RootSystem, root_index: int) -> LatticeVector:
    """Return ``X_alpha = 2 pi alpha / <alpha, alpha>`` for the indexed root.

    Its norm is the length of the closed geodesic generated by ``X_alpha``;
    for the highest root this is ``2 pi``.
    """
    if not 0 <= root_index < len(rs.roots):
        raise IndexError(f"root index {root_index} out of range")
    x = _dual(rs.roots[root_index])
    return LatticeVector(x, int(root_index), float(np.linalg.norm(x)))


def lattice_basis(rs: RootSystem) -> np.ndarray:
    """Rows form a Z-basis of the lattice generated by all ``X_alpha``.

    The dual vectors of the positive roots form a positive system of the dual
    root system; its indecomposable elements are the simple dual roots.
    """
    X = np.array([_dual(a) for a in rs.positive_roots])
    simple = []
    for i, x in enumerate(X):
        diffs = x - X
        decomposable = any(
            j != i and np.min(np.linalg.norm(X - diffs[j], axis=1)) < 1e-9
            for j in range(len(X))
        )
        if not decomposable:
            simple.append(x)
    B = np.array(simple)
    if B.shape != (rs.rank, rs.rank):
        raise RuntimeError("could not extract a simple system from the dual roots")
    return B


def in_dual_lattice(rs: RootSystem, Y, tol: float = PARITY_TOL) -> bool:
    coeffs = np.linalg.solve(lattice_basis(rs).T, np.asarray(Y, dtype=float))
    return bool(np.all(np.abs(coeffs - np.round(coeffs)) <= tol))


def odd_root_set(rs: RootSystem, Y, tol: float = PARITY_TOL) -> frozenset:
    """Positive roots alpha with ``2 <alpha, Y> / pi`` an odd integer.

    Values whose distance to the nearest integer falls in ``(tol, 2 tol)``
    cannot be classified reliably and raise :class:`UnstableParityError`.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (rs.rank,):
        raise ValueError(f"Y must have shape ({rs.rank},), got {Y.shape}")
    out = set()
    for i in rs.positive:
        v = 2.0 * (rs.roots[i] @ Y) / np.pi
        k = np.round(v)
        dist = abs(v - k)
        if tol < dist < 2 * tol:
            raise UnstableParityError(
                f"root {i}: 2<alpha,Y>/pi = {v!r} is {dist:.3g} from an integer"
            )
        if dist <= tol and int(k) % 2 != 0:
            out.add(int(i))
    return frozenset(out)


@dataclass
class PairingReport:
    family: str
    rank: int
    pairings: dict            # positive-root index -> <beta, X_delta>
    offending: list
    n_plus_minus_pi: int
    at_least_two: bool | None  # None for rank one
    ok: bool

    def multiset(self) -> list:
        return sorted(self.pairings.values())


def check_longest_root_pairing(rs: RootSystem, tol: float = 1e-12) -> PairingReport:
    """Check that every positive root pairs with ``X_delta`` to 0, +-pi or 2 pi.

    Only ``delta`` itself may pair to ``2 pi``. For rank >= 2 the report also
    records whether at least two positive roots pair to ``+-pi``.
    """
    X = _dual(rs.delta)
    pairings, offending = {}, []
    n_pi = 0
    for i in rs.positive:
        v = float(rs.roots[i] @ X)
        pairings[int(i)] = v
        if i == rs.highest:
            if abs(v - 2 * np.pi) > tol:
                offending.append(int(i))
        elif abs(abs(v) - np.pi) <= tol:
            n_pi += 1
        elif abs(v) > tol:
            offending.append(int(i))
    two = None if rs.rank < 2 else n_pi >= 2
    ok = not offending and two is not False
    return PairingReport(rs.family, rs.rank, pairings, offending, n_pi, two, ok)


# -- symmetric spaces ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymmetricSpaceDescriptor:
    """A compact symmetric space given by its restricted roots.

    ``multiplicity`` maps an orbit label of ``root_system`` to ``m(alpha)``.
    """

    name: str
    root_system: RootSystem
    multiplicity: Mapping[str, int]
    dimension: int

    def __post_init__(self):
        labels = set(self.root_system.orbit_labels)
        if set(self.multiplicity) != labels:
            raise ValueError(f"{self.name}: multiplicities given for {sorted(self.multiplicity)}, "
                             f"root orbits are {sorted(labels)}")
        if any(m <= 0 for m in self.multiplicity.values()):
            raise ValueError(f"{self.name}: multiplicities must be positive")
        expected = self.root_system.rank + sum(self.m(i) for i in self.root_system.positive)
        if expected != self.dimension:
            raise ValueError(f"{self.name}: dimension {self.dimension} != rank + sum m = {expected}")

    def m(self, index: int) -> int:
        return int(self.multiplicity[self.root_system.orbit(index)])

    @property
    def is_sphere(self) -> bool:
        return self.root_system.family == "A" and self.root_system.rank == 1

    def antipode_vector(self) -> np.ndarray:
        """``X_delta / 2``: the flat-coordinate midpoint of a shortest closed geodesic."""
        return 0.5 * dual_vector(self.root_system, self.root_system.highest).coordinates


_REDUCTION = {
    # family, kept orbit labels -> family after dropping zero multiplicities
    ("BC", ("long", "medium")): "C",
    ("BC", ("medium", "short")): "B",
    ("BC", ("long",)): "A",
    ("BC", ("short",)): "A",
}


def make_descriptor(name, family, rank, multiplicity, dimension) -> SymmetricSpaceDescriptor:
    """Build a descriptor, collapsing orbits whose multiplicity is zero.

    A BC system with a vanishing orbit reduces to B, C or (rank one) A; the
    surviving multiplicities are re-keyed by relative root length.
    """
    rs = build_root_system(family, rank)
    multiplicity = dict(multiplicity)
    kept = tuple(lbl for lbl in ("long", "medium", "short") if multiplicity.get(lbl, 1) != 0
                 and lbl in rs.orbit_labels)
    if len(kept) < len(set(rs.orbit_labels)):
        new_family = _REDUCTION.get((family, kept))
        if new_family is None:
            raise ValueError(f"{name}: cannot drop orbits of {family}{rank} down to {kept}")
        rs = build_root_system(new_family, rank)
        new_labels = [lbl for lbl in ("long", "medium", "short") if lbl in rs.orbit_labels]
        multiplicity = {new: multiplicity[old] for old, new in zip(kept, new_labels)}
    return SymmetricSpaceDescriptor(name, rs, multiplicity, int(dimension))


# Multiplicities below are the standard restricted-root data of the compact
# rank-one spaces and of the complex quadric (Helgason, DGLSS, Ch. X, Table V).

def sphere(n: int) -> SymmetricSpaceDescriptor:
    if n < 2:
        raise ValueError("S^n requires n >= 2")
    return make_descriptor(f"S^{n}", "A", 1, {"long": n - 1}, n)


def complex_projective(n: int) -> SymmetricSpaceDescriptor:
    if n < 1:
        raise ValueError("CP^n requires n >= 1")
    return make_descriptor(f"CP^{n}", "BC", 1, {"long": 1, "short": 2 * n - 2}, 2 * n)


def quaternionic_projective(n: int) -> SymmetricSpaceDescriptor:
    if n < 1:
        raise ValueError("HP^n requires n >= 1")
    return make_descriptor(f"HP^{n}", "BC", 1, {"long": 3, "short": 4 * n - 4}, 4 * n)


def cayley_plane() -> SymmetricSpaceDescriptor:
    return make_descriptor("OP^2", "BC", 1, {"long": 7, "short": 8}, 16)


def complex_quadric(n: int) -> SymmetricSpaceDescriptor:
    if n < 3:
        raise ValueError("Q^n is irreducible with B2 roots only for n >= 3")
    return make_descriptor(f"Q^{n}", "B", 2, {"long": 1, "short": n - 2}, 2 * n)


def descriptor_table(n: int = 3) -> list:
    """Bundled descriptors: S^n, CP^n, HP^n, OP^2 and Q^n (n >= 3)."""
    return [sphere(n), complex_projective(n), quaternionic_projective(n),
            cayley_plane(), complex_quadric(max(n, 3))]


def helgason_sphere_dimension(space: SymmetricSpaceDescriptor) -> int:
    """Maximal dimension ``m(delta) + 1`` of a totally geodesic unit sphere."""
    return space.m(space.root_system.highest) + 1


def midpoint_locus_dimension(space: SymmetricSpaceDescriptor, Y, tol: float = PARITY_TOL) -> int:
    """Dimension of the orbit of ``Exp(Y)`` under the isotropy group of the base point.

    ``Y`` must lie in half the dual lattice but not in the lattice itself, so
    that ``Exp(Y)`` is an antipode of the base point along ``t -> Exp(2tY)``.
    """
    rs = space.root_system
    Y = np.asarray(Y, dtype=float)
    if not in_dual_lattice(rs, 2.0 * Y, tol):
        raise ValueError("2Y is not in the dual lattice; Exp(Y) is not an antipode")
    if in_dual_lattice(rs, Y, tol):
        raise ValueError("Y lies in the dual lattice; Exp(Y) is the base point itself")
    return sum(space.m(i) for i in odd_root_set(rs, Y, tol))
