# filterbank/polyapprox.py
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import chebyshev
from numpy.polynomial import polynomial as P

from config import get_logger
from constants import (
    REMEZ_DEFAULT_TARGET,
    REMEZ_GRID_MIN,
    REMEZ_MAX_ITER,
    REMEZ_POINTS_PER_COEFF,
    REMEZ_RTOL,
    REMEZ_TARGETS,
    TARGET_INTERPOLANT,
)
from .design import check_tie_consistency
from .errors import (
    DegenerateSpectrumError,
    InvalidParamError,
    LengthMismatchError,
    NoConvergenceError,
)
from .spectral import SpectralDecomposition, tie_groups

logger = get_logger(__name__)


@dataclass(frozen=True)
class FilterPolynomial:
    """
    Degree-``m`` polynomial stored by its Chebyshev coefficients in the scaled
    variable ``t = 2 * lambda / domain_max - 1``, which maps the spectrum onto
    ``[-1, 1]``.
    """
    degree: int
    coefficients: np.ndarray
    domain_max: float
    sup_error: float
    converged: bool = True
    target: str = REMEZ_DEFAULT_TARGET

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float)
        if coefficients.shape != (self.degree + 1,):
            raise LengthMismatchError(
                f"Degree {self.degree} needs {self.degree + 1} coefficients, got {coefficients.size}"
            )
        if not self.domain_max > 0:
            raise InvalidParamError(f"domain_max must be positive, got {self.domain_max}")
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)

    def scaled(self, lam) -> np.ndarray:
        return 2.0 * np.asarray(lam, dtype=float) / self.domain_max - 1.0

    def __call__(self, lam) -> np.ndarray:
        return chebyshev.chebval(self.scaled(lam), self.coefficients)

    def lambda_coefficients(self) -> np.ndarray:
        """Monomial coefficients in lambda itself, lowest order first."""
        t_of_lambda = P.Polynomial([-1.0, 2.0 / self.domain_max])
        coef = P.Polynomial(chebyshev.cheb2poly(self.coefficients))(t_of_lambda).coef
        out = np.zeros(self.degree + 1)
        out[:coef.size] = coef
        return out

    def to_dict(self) -> dict:
        return {
            'degree': self.degree,
            'domain_max': self.domain_max,
            'coefficients': self.lambda_coefficients().tolist(),
            'chebyshev_coefficients': self.coefficients.tolist(),
            'sup_error': self.sup_error,
            'converged': self.converged,
            'target': self.target,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'FilterPolynomial':
        try:
            return cls(
                degree=int(data['degree']),
                coefficients=data['chebyshev_coefficients'],
                domain_max=float(data['domain_max']),
                sup_error=float(data.get('sup_error', 0.0)),
                converged=bool(data.get('converged', True)),
                target=data.get('target', REMEZ_DEFAULT_TARGET),
            )
        except KeyError as exc:
            raise InvalidParamError(f"Polynomial record is missing field {exc}") from exc


def _initial_reference(t: np.ndarray, m: int) -> np.ndarray:
    """Grid points nearest the Chebyshev extrema, or an even spread if those collide."""
    extrema = np.cos(np.pi * np.arange(m + 1, -1, -1) / (m + 1))
    ref = np.unique(np.abs(t[None, :] - extrema[:, None]).argmin(axis=1))
    if ref.size == m + 2:
        return ref
    return np.unique(np.round(np.linspace(0, t.size - 1, m + 2)).astype(int))


def _alternating_extrema(err: np.ndarray) -> list:
    """Largest-magnitude point of every run of equal error sign."""
    idx = np.flatnonzero(err != 0)
    ext = []
    for i in idx:
        if ext and np.sign(err[ext[-1]]) == np.sign(err[i]):
            if abs(err[i]) > abs(err[ext[-1]]):
                ext[-1] = i
        else:
            ext.append(i)
    return ext


def _exchange(err: np.ndarray, m: int) -> Optional[np.ndarray]:
    """
    New reference of ``m + 2`` alternating extrema that keeps the global
    maximum. Returns ``None`` when fewer than ``m + 2`` sign changes exist.
    """
    ext = _alternating_extrema(err)
    while len(ext) > m + 2:
        mags = np.abs(err[ext])
        k = int(np.argmin(mags))
        interior = 0 < k < len(ext) - 1
        if interior and len(ext) > m + 3:
            j = k - 1 if mags[k - 1] < mags[k + 1] else k + 1
            for pos in sorted((k, j), reverse=True):
                del ext[pos]
        elif interior:
            del ext[0 if mags[0] <= mags[-1] else -1]
        else:
            del ext[k]
    if len(ext) < m + 2:
        return None
    return np.array(ext)


def _discrete_remez(
    t: np.ndarray,
    values: np.ndarray,
    m: int,
    max_iter: int,
    rtol: float,
) -> Tuple[np.ndarray, bool]:
    """Chebyshev coefficients of the minimax degree-``m`` fit on the points ``t``."""
    if t.size <= m + 1:
        coef = np.zeros(m + 1)
        coef[:t.size] = chebyshev.chebfit(t, values, t.size - 1)
        return coef, True

    V = chebyshev.chebvander(t, m)
    signs = (-1.0) ** np.arange(m + 2)
    floor = 1e-14 * max(1.0, float(np.max(np.abs(values))))
    ref = _initial_reference(t, m)
    best_coef, best_peak = None, np.inf
    for _ in range(max_iter):
        system = np.column_stack([V[ref], signs])
        try:
            solution = np.linalg.solve(system, values[ref])
        except np.linalg.LinAlgError:
            solution = np.linalg.lstsq(system, values[ref], rcond=None)[0]
        coef, level = solution[:-1], abs(solution[-1])
        err = values - V @ coef
        peak = float(np.max(np.abs(err)))
        if peak < best_peak:
            best_coef, best_peak = coef, peak
        if peak - level <= rtol * peak or peak <= floor:
            return coef, True
        new_ref = _exchange(err, m)
        if new_ref is None or np.array_equal(new_ref, ref):
            return best_coef, True
        ref = new_ref
    return best_coef, False


def _grid(domain_max: float, nodes: np.ndarray, m: int) -> np.ndarray:
    k = max(REMEZ_GRID_MIN, REMEZ_POINTS_PER_COEFF * (m + 1))
    cheb = domain_max / 2.0 * (1.0 - np.cos(np.pi * np.arange(k) / (k - 1)))
    return np.unique(np.concatenate([cheb, nodes]))


def remez_fit(
    eigenvalues: Sequence[float],
    h: Sequence[float],
    m: int,
    target: str = REMEZ_DEFAULT_TARGET,
    max_iter: int = REMEZ_MAX_ITER,
    rtol: float = REMEZ_RTOL,
    strict: bool = False,
) -> FilterPolynomial:
    """
    Best uniform degree-``m`` approximation of a filter vector.

    The default ``"interpolant"`` target fits the piecewise-linear profile
    through ``(lambda_i, h_i)`` on a Chebyshev grid of
    ``max(2000, 50 * (m + 1))`` points over ``[0, lambda_max]`` plus every
    eigenvalue. ``"spectrum"`` is minimax over the distinct eigenvalues only,
    which is the operator-norm optimum. The exchange stops once the reference
    level agrees with the peak error to ``rtol``. ``sup_error`` is measured at
    the eigenvalues in both cases.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    h = np.asarray(h, dtype=float)
    if h.shape != lam.shape:
        raise LengthMismatchError(f"Filter length {h.size} does not match {lam.size} eigenvalues")
    if m < 1:
        raise InvalidParamError(f"Degree must be >= 1, got {m}")
    if target not in REMEZ_TARGETS:
        raise InvalidParamError(f"Unknown Remez target {target!r}; expected one of {REMEZ_TARGETS}")
    check_tie_consistency(h, lam, "Filter vector")
    domain_max = float(lam[-1])
    if not domain_max > 0:
        raise DegenerateSpectrumError("Largest eigenvalue must be positive")

    groups = tie_groups(lam)
    nodes = np.array([lam[g].mean() for g in groups])
    node_values = np.array([h[g].mean() for g in groups])
    if target == TARGET_INTERPOLANT:
        points = _grid(domain_max, nodes, m)
        values = np.interp(points, nodes, node_values)
    else:
        points, values = nodes, node_values

    cheb_coef, converged = _discrete_remez(
        2.0 * points / domain_max - 1.0, values, m, max_iter, rtol,
    )
    if not converged:
        message = f"Remez exchange did not converge in {max_iter} iterations (degree {m})"
        if strict:
            raise NoConvergenceError(message)
        logger.warning("%s; returning best iterate", message)

    t = 2.0 * lam / domain_max - 1.0
    sup_error = float(np.max(np.abs(h - chebyshev.chebval(t, cheb_coef))))
    return FilterPolynomial(
        degree=m,
        coefficients=cheb_coef,
        domain_max=domain_max,
        sup_error=sup_error,
        converged=converged,
        target=target,
    )


def poly_apply(fp: FilterPolynomial, L, x: Sequence[float]) -> np.ndarray:
    """
    ``p(L) x`` by the Clenshaw recurrence in ``T = 2 L / domain_max - I``.
    Exactly ``degree`` products with ``L`` (dense or sparse) are taken, so the
    result is supported on the ``degree``-hop neighbourhood of ``x``'s support.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or L.shape != (x.size, x.size):
        raise LengthMismatchError(f"Operator shape {L.shape} does not match signal length {x.size}")
    scale = 2.0 / fp.domain_max

    def shifted(v):
        return np.asarray(scale * (L @ v) - v).ravel()

    c = fp.coefficients
    if fp.degree == 0:
        return c[0] * x
    b_next = c[-1] * x
    b_after = np.zeros_like(x)
    for coef in c[-2:0:-1]:
        b_next, b_after = coef * x + 2.0 * shifted(b_next) - b_after, b_next
    return c[0] * x + shifted(b_next) - b_after


def operator_error(sd: SpectralDecomposition, h: Sequence[float], fp: FilterPolynomial) -> float:
    """``max_i |h_i - p(lambda_i)|``, equal to the operator 2-norm of ``F_h - p(L)``."""
    h = np.asarray(h, dtype=float)
    if h.shape != (sd.n,):
        raise LengthMismatchError(f"Filter length {h.size} does not match n={sd.n}")
    return float(np.max(np.abs(h - fp(sd.eigenvalues))))


def error_bound(M: float, lambda_max: float, m: int) -> float:
    """Uniform approximation bound ``6 * lambda_max * M / m``."""
    if m < 1:
        raise InvalidParamError(f"Degree must be >= 1, got {m}")
    return 6.0 * lambda_max * M / m
