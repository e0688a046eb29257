# filterbank/sampler.py
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from constants import ORTHOGONALITY_TOL
from .errors import InvalidParamError, NotOrthogonalError
from .spectral import SpectralDecomposition

SQRT2 = np.sqrt(2.0)


def channel_sizes(n: int) -> Tuple[int, int]:
    """Return ``(s, r)``: lowpass and highpass channel sizes for ``n`` vertices."""
    return (n + 1) // 2, n // 2


def make_phi(n: int) -> np.ndarray:
    """Anti-diagonal permutation ``[e_N, ..., e_1]``."""
    if n < 1:
        raise InvalidParamError(f"n must be >= 1, got {n}")
    return np.fliplr(np.eye(n))


def make_p0_p1(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Factors with ``I + Phi = P0 P0^T`` (N x s) and ``I - Phi = P1 P1^T`` (N x r).
    Odd ``n`` puts ``sqrt(2)`` on the middle row of ``P0`` and a zero row in ``P1``.
    """
    if n < 1:
        raise InvalidParamError(f"n must be >= 1, got {n}")
    s, r = channel_sizes(n)
    eye_r = np.eye(r)
    phi_r = np.fliplr(eye_r)
    P0 = np.zeros((n, s))
    P1 = np.zeros((n, r))
    P0[:r, :r] = eye_r
    P0[n - r:, :r] = phi_r
    P1[:r, :] = eye_r
    P1[n - r:, :] = -phi_r
    if n % 2:
        P0[r, r] = SQRT2
    return P0, P1


def make_q(sd: SpectralDecomposition) -> np.ndarray:
    """Spectral flip ``Q = U Phi U^T``."""
    U = sd.basis
    Q = U[:, ::-1] @ U.T
    return (Q + Q.T) / 2.0


def is_orthogonal(M: np.ndarray, tol: float = ORTHOGONALITY_TOL) -> bool:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    return float(np.max(np.abs(M.T @ M - np.eye(M.shape[0])), initial=0.0)) <= tol


@dataclass(frozen=True)
class SamplerSet:
    """Generalized down/up samplers of both channels and the flip operator."""
    A_L: np.ndarray
    A_H: np.ndarray
    Q: np.ndarray
    U1: np.ndarray

    @property
    def s(self) -> int:
        return self.A_L.shape[0]

    @property
    def r(self) -> int:
        return self.A_H.shape[0]

    @property
    def B_L(self) -> np.ndarray:
        return self.A_L.T

    @property
    def B_H(self) -> np.ndarray:
        return self.A_H.T


def make_samplers(sd: SpectralDecomposition, U1: Optional[np.ndarray] = None) -> SamplerSet:
    """
    ``A_L = U1 P0^T U^T / sqrt(2)`` and ``A_H = P1^T U^T / sqrt(2)``.
    ``U1`` defaults to the identity; reconstruction does not depend on it.
    """
    n = sd.n
    s, _ = channel_sizes(n)
    if U1 is None:
        U1 = np.eye(s)
    U1 = np.asarray(U1, dtype=float)
    if U1.shape != (s, s):
        raise NotOrthogonalError(f"U1 must be {s}x{s}, got shape {U1.shape}")
    if not is_orthogonal(U1):
        raise NotOrthogonalError("U1 is not orthogonal")

    P0, P1 = make_p0_p1(n)
    Ut = sd.basis.T
    A_L = U1 @ (P0.T @ Ut) / SQRT2
    A_H = (P1.T @ Ut) / SQRT2
    return SamplerSet(A_L=A_L, A_H=A_H, Q=make_q(sd), U1=U1)


def sampler_residuals(sd: SpectralDecomposition, samplers: SamplerSet) -> dict:
    """Max-entry residuals of the sampler identities; all should be near zero."""
    n = sd.n
    eye = np.eye(n)
    Q = samplers.Q
    U = sd.basis

    def worst(M):
        return float(np.max(np.abs(M), initial=0.0))

    return {
        'lowpass_projector': worst(samplers.B_L @ samplers.A_L - (eye + Q) / 2.0),
        'highpass_projector': worst(samplers.B_H @ samplers.A_H - (eye - Q) / 2.0),
        'q_orthogonal': worst(Q.T @ Q - eye),
        'q_symmetric': worst(Q - Q.T),
        'q_flip': worst(Q @ U - U[:, ::-1]),
    }
