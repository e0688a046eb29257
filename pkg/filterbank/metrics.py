# filterbank/metrics.py
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from config import get_logger
from constants import IMPULSE_TAU_RATIO, PR_TOL, STEP_AMPLITUDE
from .design import FilterBank
from .errors import (
    HypothesisViolatedError,
    InvalidParamError,
    LengthMismatchError,
    ZeroSignalError,
)
from .graph import Graph, hop_distances, laplacian
from .polyapprox import FilterPolynomial, poly_apply
from .sampler import channel_sizes
from .spectral import SpectralDecomposition, apply_filter, gft

logger = get_logger(__name__)

FilterLike = Union[np.ndarray, Sequence[float], FilterPolynomial]


def _pair(f, fr):
    f = np.asarray(f, dtype=float)
    fr = np.asarray(fr, dtype=float)
    if f.shape != fr.shape:
        raise LengthMismatchError(f"Signals have shapes {f.shape} and {fr.shape}")
    return f, fr


def rel_error(f: Sequence[float], fr: Sequence[float]) -> float:
    """``||f - fr|| / ||f||``."""
    f, fr = _pair(f, fr)
    norm = float(np.linalg.norm(f))
    if norm == 0:
        raise ZeroSignalError("Relative error is undefined for a zero reference signal")
    return float(np.linalg.norm(f - fr)) / norm


def snr(f: Sequence[float], fr: Sequence[float]) -> float:
    """SNR in dB; an exact reconstruction returns ``math.inf``."""
    f, fr = _pair(f, fr)
    signal = float(np.sum(f ** 2))
    if signal == 0:
        raise ZeroSignalError("SNR is undefined for a zero reference signal")
    noise = float(np.sum((f - fr) ** 2))
    if noise == 0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def _check_hypothesis(bank: FilterBank) -> None:
    if abs(bank.g0[-1]) > PR_TOL:
        raise HypothesisViolatedError(
            f"Lowpass error bound needs g0 to vanish at lambda_max, got g0(N)={bank.g0[-1]:.3g}"
        )


def _spectrum(bank: FilterBank, sd: SpectralDecomposition, x) -> np.ndarray:
    if bank.n != sd.n:
        raise LengthMismatchError(f"Filter bank has n={bank.n}, spectrum has n={sd.n}")
    return gft(sd, x)


def lowpass_error(bank: FilterBank, sd: SpectralDecomposition, x: Sequence[float]) -> float:
    """
    ``||x - F_g0 B_L A_L F_h0 x||``. Since ``B_L A_L = (I + Q) / 2`` for any
    orthogonal ``U1``, this is evaluated on Fourier coefficients alone.
    """
    xhat = _spectrum(bank, sd, x)
    low = bank.h0 * xhat
    recon = bank.g0 * (low + low[::-1]) / 2.0
    return float(np.linalg.norm(xhat - recon))


@dataclass(frozen=True)
class ErrorBoundParts:
    sigma1: float
    sigma2: float
    A1: float
    A2: float

    @property
    def bound(self) -> float:
        return (self.A1 * math.sqrt(self.sigma1) + self.A2 * math.sqrt(self.sigma2)) / 2.0

    def relaxed(self, dirichlet: float) -> float:
        """Bound in terms of the Dirichlet energy ``S2(x) >= sigma1 + sigma2``."""
        return 0.5 * math.sqrt(self.A1 ** 2 + self.A2 ** 2) * math.sqrt(max(dirichlet, 0.0))

    def to_dict(self) -> dict:
        return {
            'sigma1': self.sigma1,
            'sigma2': self.sigma2,
            'A1': self.A1,
            'A2': self.A2,
            'bound': self.bound,
        }


def bound_constants(bank: FilterBank, eigenvalues: Sequence[float]) -> tuple:
    """``(A1, A2)`` from ``c_i(h0) * g0(N+1-i) / sqrt(lambda_i)`` over both index ranges."""
    _check_hypothesis(bank)
    lam = np.asarray(eigenvalues, dtype=float)
    n = lam.size
    s, r = channel_sizes(n)
    c = np.sqrt(bank.h0 ** 2 + bank.h0[::-1] ** 2)
    ratio = np.zeros(n)
    positive = lam > 0
    ratio[positive] = np.abs(c[positive] * bank.g0[::-1][positive]) / np.sqrt(lam[positive])
    A1 = float(np.max(ratio[1:r], initial=0.0))
    A2 = float(np.max(ratio[s:], initial=0.0))
    return A1, A2


def orthogonal_bound_constants(bank: FilterBank, eigenvalues: Sequence[float]) -> tuple:
    """Orthogonal-bank shortcut ``sqrt(2 * (2 - y_i) / lambda_i)`` for both ranges."""
    _check_hypothesis(bank)
    if not bank.is_orthogonal:
        raise InvalidParamError("The shortcut constants only apply to orthogonal banks")
    lam = np.asarray(eigenvalues, dtype=float)
    s, r = channel_sizes(lam.size)
    ratio = np.zeros(lam.size)
    positive = lam > 0
    slack = np.clip(2.0 - bank.y, 0.0, None)
    ratio[positive] = np.sqrt(2.0 * slack[positive] / lam[positive])
    return float(np.max(ratio[1:r], initial=0.0)), float(np.max(ratio[s:], initial=0.0))


def lowpass_error_bound(bank: FilterBank, sd: SpectralDecomposition, x: Sequence[float]) -> ErrorBoundParts:
    """Energy split and constants of the lowpass-channel error bound."""
    _check_hypothesis(bank)
    xhat = _spectrum(bank, sd, x)
    lam = sd.eigenvalues
    s, r = channel_sizes(sd.n)
    energy = lam * xhat ** 2
    A1, A2 = bound_constants(bank, lam)
    return ErrorBoundParts(
        sigma1=float(np.sum(energy[:r])),
        sigma2=float(np.sum(energy[s:])),
        A1=A1,
        A2=A2,
    )


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + PR_TOL


def dirichlet_bound_check(bank: FilterBank, sd: SpectralDecomposition, x: Sequence[float]) -> BoundCheck:
    """Measured lowpass error against ``0.5 * sqrt(A1^2 + A2^2) * sqrt(S2(x))``."""
    parts = lowpass_error_bound(bank, sd, x)
    xhat = gft(sd, x)
    dirichlet = float(np.sum(sd.eigenvalues * xhat ** 2))
    check = BoundCheck(lowpass_error(bank, sd, x), parts.relaxed(dirichlet))
    if not check.holds:
        logger.warning("Dirichlet bound violated: %.6g > %.6g", check.lhs, check.rhs)
    return check


def impulse_response(
    g: Graph,
    sd: SpectralDecomposition,
    filt: FilterLike,
    v: int,
) -> np.ndarray:
    """Response of a spectral filter vector or a polynomial filter to ``e_v``."""
    if not 0 <= v < g.n:
        raise InvalidParamError(f"Vertex {v} out of range for n={g.n}")
    impulse = np.zeros(g.n)
    impulse[v] = 1.0
    if isinstance(filt, FilterPolynomial):
        return poly_apply(filt, laplacian(g), impulse)
    return apply_filter(sd, filt, impulse)


def impulse_spread(
    g: Graph,
    sd: SpectralDecomposition,
    filt: FilterLike,
    v: int,
    tau: Optional[float] = None,
) -> int:
    """
    Largest hop distance from ``v`` at which the impulse response exceeds
    ``tau`` (default ``1e-3`` of the peak magnitude).
    """
    response = impulse_response(g, sd, filt, v)
    if tau is None:
        tau = IMPULSE_TAU_RATIO * float(np.max(np.abs(response)))
    if tau < 0:
        raise InvalidParamError(f"Threshold must be nonnegative, got {tau}")
    hops = hop_distances(g, v)
    active = np.abs(response) > tau
    return int(np.max(hops[active], initial=0))


def step_signal(n: int) -> np.ndarray:
    """Quarter-period sine ramp from 0 at the first vertex to 0.2 at the last."""
    if n < 2:
        raise InvalidParamError(f"Step signal needs n >= 2, got {n}")
    k = np.arange(n)
    return STEP_AMPLITUDE * np.sin(k * np.pi / (2.0 * (n - 1)))
