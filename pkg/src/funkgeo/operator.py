"""Discretized transform operators and their rank analysis.

Both the sphere and the projective-space experiments go through the
functions here, so any rank difference between the two models cannot come
from the linear algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TransformOperator",
    "KernelAnalysis",
    "rank_revealing_spectrum",
    "kernel_analysis",
    "least_squares_invert",
    "DEFAULT_TOL_RATIO",
    "REQUIRED_GAP",
]

DEFAULT_TOL_RATIO = 1e-8
REQUIRED_GAP = 1e3


@dataclass(frozen=True, eq=False)
class TransformOperator:
    """Rows are sampled closed geodesics, columns are basis functions.

    Entry ``(i, j)`` is the integral of basis function ``j`` over geodesic ``i``.
    """

    matrix: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.matrix.shape

    def apply(self, coefficients) -> np.ndarray:
        return self.matrix @ np.asarray(coefficients)


def _as_matrix(op) -> np.ndarray:
    return op.matrix if isinstance(op, TransformOperator) else np.asarray(op)


def rank_revealing_spectrum(matrix) -> np.ndarray:
    """Singular values in non-increasing order (LAPACK divide-and-conquer SVD)."""
    A = _as_matrix(matrix)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


@dataclass
class KernelAnalysis:
    rank: int
    kernel: np.ndarray          # (n_cols, kernel_dim), orthonormal columns
    singular_values: np.ndarray
    gap: float
    separated: bool

    @property
    def kernel_dim(self) -> int:
        return self.kernel.shape[1]

    @property
    def n_cols(self) -> int:
        return self.kernel.shape[0]


def kernel_analysis(op, tol_ratio: float = DEFAULT_TOL_RATIO,
                    required_gap: float = REQUIRED_GAP) -> KernelAnalysis:
    """Numerical rank and right null space of an operator.

    The rank counts singular values above ``tol_ratio * sigma_1``. Columns in
    excess of the row count are always part of the kernel. ``gap`` is the
    ratio of the smallest kept singular value to the largest discarded one;
    when nothing is discarded the threshold ``tol_ratio * sigma_1`` stands in
    for it. ``separated`` is False when the gap is below ``required_gap``.
    """
    A = _as_matrix(op)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    n_rows, n_cols = A.shape
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return KernelAnalysis(0, np.eye(n_cols, dtype=A.dtype), s, np.inf, True)
    threshold = tol_ratio * s[0]
    rank = int(np.count_nonzero(s > threshold))
    kernel = vh[rank:].conj().T
    below = s[rank] if rank < s.size else (0.0 if rank < n_cols else threshold)
    gap = np.inf if below == 0.0 else float(s[rank - 1] / below)
    return KernelAnalysis(rank, kernel, s, gap, gap >= required_gap)


def least_squares_invert(op, data, reg: float = 0.0) -> np.ndarray:
    """Minimize ``||A x - data||^2 + reg ||x||^2``.

    With ``reg = 0`` this is the minimum-norm least-squares solution using the
    default LAPACK cutoff. Ridge mode solves the augmented system, which is
    better conditioned than the normal equations.
    """
    A = _as_matrix(op)
    data = np.asarray(data)
    if data.shape[0] != A.shape[0]:
        raise ValueError(f"data has {data.shape[0]} rows, operator has {A.shape[0]}")
    if reg < 0:
        raise ValueError("reg must be nonnegative")
    if reg == 0:
        return np.linalg.lstsq(A, data, rcond=None)[0]
    n = A.shape[1]
    A_aug = np.vstack([A, np.sqrt(reg) * np.eye(n, dtype=A.dtype)])
    pad = np.zeros((n,) + data.shape[1:], dtype=np.result_type(data, A))
    return np.linalg.lstsq(A_aug, np.concatenate([data, pad]), rcond=None)[0]
