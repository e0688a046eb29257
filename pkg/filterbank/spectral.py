# filterbank/spectral.py
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.linalg

from config import get_dense_limit, get_logger
from constants import SIGN_THRESHOLD, SYMMETRY_RTOL, TIE_RTOL
from .errors import (
    EigFailureError,
    LengthMismatchError,
    NotSymmetricError,
    TooLargeError,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending Laplacian eigenvalues and the matching orthonormal basis ``U``."""
    eigenvalues: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        eigenvalues = np.array(self.eigenvalues, dtype=float)
        basis = np.array(self.basis, dtype=float)
        if basis.shape != (eigenvalues.size, eigenvalues.size):
            raise LengthMismatchError(
                f"Basis shape {basis.shape} does not match {eigenvalues.size} eigenvalues"
            )
        eigenvalues.setflags(write=False)
        basis.setflags(write=False)
        object.__setattr__(self, 'eigenvalues', eigenvalues)
        object.__setattr__(self, 'basis', basis)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def tie_groups(self) -> List[np.ndarray]:
        return tie_groups(self.eigenvalues)


def tie_tolerance(eigenvalues: Sequence[float]) -> float:
    """Absolute tolerance under which two eigenvalues count as equal."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    top = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    return TIE_RTOL * max(1.0, top)


def tie_groups(eigenvalues: Sequence[float]) -> List[np.ndarray]:
    """
    Split sorted eigenvalue indices into maximal runs of numerically equal
    values. Ties chain: a run continues while consecutive gaps stay within
    the tolerance.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if eigenvalues.size == 0:
        return []
    tol = tie_tolerance(eigenvalues)
    breaks = np.flatnonzero(np.diff(eigenvalues) > tol) + 1
    return np.split(np.arange(eigenvalues.size), breaks)


def _apply_sign_convention(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its first entry above the threshold is positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        significant = np.flatnonzero(np.abs(out[:, k]) > SIGN_THRESHOLD)
        if significant.size and out[significant[0], k] < 0:
            out[:, k] = -out[:, k]
    return out


def _leading_index(column: np.ndarray) -> int:
    significant = np.flatnonzero(np.abs(column) > SIGN_THRESHOLD)
    return int(significant[0]) if significant.size else column.size


def _canonical_eigenspace(vectors: np.ndarray) -> np.ndarray:
    """
    Basis of span(vectors) that does not depend on which orthonormal basis the
    solver returned.

    Column ``j`` of the projector ``V V^T`` is ``V c_j`` with ``c_j = V[j, :]``,
    so Gram-Schmidt with column pivoting runs on the k x N coefficients.
    Pivots go to the largest residual norm, lowest vertex index first among
    norms equal within ``TIE_RTOL``; the picked projector columns are then
    sign-fixed and ordered by their leading index.
    """
    k = vectors.shape[1]
    residual = vectors.T.copy()
    picked = []
    for _ in range(k):
        norms = np.linalg.norm(residual, axis=0)
        top = float(norms.max())
        j = int(np.flatnonzero(norms >= top * (1.0 - TIE_RTOL))[0])
        q = residual[:, j] / norms[j]
        residual -= np.outer(q, q @ residual)
        picked.append(q)
    basis = _apply_sign_convention(vectors @ np.column_stack(picked))
    order = sorted(range(k), key=lambda col: _leading_index(basis[:, col]))
    return basis[:, order]


def eig_sym(L: np.ndarray) -> SpectralDecomposition:
    """
    Deterministic dense eigendecomposition of a symmetric PSD matrix.

    Eigenvalues come back ascending; any eigenvalue within the tie tolerance
    of zero is stored as exactly 0. Tied groups get a canonical basis.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise NotSymmetricError(f"Expected a square matrix, got shape {L.shape}")
    scale = max(1.0, float(np.max(np.abs(L)))) if L.size else 1.0
    if not np.all(np.isfinite(L)):
        raise EigFailureError("Matrix contains non-finite entries")
    if np.max(np.abs(L - L.T), initial=0.0) > SYMMETRY_RTOL * scale:
        raise NotSymmetricError("Matrix is not symmetric")

    try:
        eigenvalues, vectors = scipy.linalg.eigh((L + L.T) / 2.0)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigFailureError(f"Symmetric eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(eigenvalues)) and np.all(np.isfinite(vectors))):
        raise EigFailureError("Symmetric eigensolver returned non-finite values")

    order = np.argsort(eigenvalues, kind='stable')
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]

    tol = tie_tolerance(eigenvalues)
    eigenvalues[np.abs(eigenvalues) <= tol] = 0.0

    basis = _apply_sign_convention(vectors)
    for group in tie_groups(eigenvalues):
        if group.size > 1:
            basis[:, group] = _canonical_eigenspace(vectors[:, group])

    logger.debug("Eigendecomposition of %dx%d matrix, lambda_max=%.6g", L.shape[0], L.shape[1], eigenvalues[-1])
    return SpectralDecomposition(eigenvalues, basis)


def _check_length(sd: SpectralDecomposition, v: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (sd.n,):
        raise LengthMismatchError(f"{what} has shape {v.shape}, expected ({sd.n},)")
    return v


def gft(sd: SpectralDecomposition, x: Sequence[float]) -> np.ndarray:
    """Graph Fourier transform ``U^T x``."""
    x = _check_length(sd, x, "Signal")
    return sd.basis.T @ x


def igft(sd: SpectralDecomposition, xhat: Sequence[float]) -> np.ndarray:
    xhat = _check_length(sd, xhat, "Coefficient vector")
    return sd.basis @ xhat


def apply_filter(sd: SpectralDecomposition, h: Sequence[float], x: Sequence[float]) -> np.ndarray:
    """``U diag(h) U^T x`` as three products, never forming the N x N operator."""
    h = _check_length(sd, h, "Filter vector")
    x = _check_length(sd, x, "Signal")
    return sd.basis @ (h * (sd.basis.T @ x))


def filter_matrix(sd: SpectralDecomposition, h: Sequence[float]) -> np.ndarray:
    """Explicit ``F_h = U diag(h) U^T``; refused above the dense limit."""
    limit = get_dense_limit()
    if sd.n > limit:
        raise TooLargeError(f"N={sd.n} exceeds the dense limit {limit} (GRAPHFB_DENSE_LIMIT)")
    h = _check_length(sd, h, "Filter vector")
    F = (sd.basis * h) @ sd.basis.T
    return (F + F.T) / 2.0
