# filterbank/design.py
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import get_logger
from constants import (
    BIOR_F_HIGH,
    BIOR_F_LOW,
    DESIGN_BIOR,
    DESIGN_IDEAL,
    DESIGN_LOCAL,
    DESIGNS,
    KIND_BIORTHOGONAL,
    KIND_ORTHOGONAL,
    PR_TOL,
    PROFILE_TIE_TOL,
    SPLIT_SQRT,
    SPLITS,
    STRATEGY_ALPHA,
    STRATEGY_BETA,
    STRATEGY_IDEAL,
    STRATEGY_TRIVIAL,
)
from .errors import (
    DegenerateSpectrumError,
    InfeasibleError,
    InvalidParamError,
    LengthMismatchError,
    OutOfRangeError,
    TieViolationError,
)
from .sampler import channel_sizes
from .spectral import tie_groups, tie_tolerance

logger = get_logger(__name__)

SQRT2 = np.sqrt(2.0)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FilterBank:
    """
    Analysis filters ``h0, h1`` and synthesis filters ``g0, g1`` over the
    spectrum of one graph.

    ``y`` is the design profile: ``h0**2`` for orthogonal banks, ``g0 * h0``
    for biorthogonal ones. ``lipschitz`` is the slope bound of ``h0`` and is
    ``None`` when ``h0`` is not constant on tied eigenvalues.
    """
    h0: np.ndarray
    h1: np.ndarray
    g0: np.ndarray
    g1: np.ndarray
    kind: str
    y: np.ndarray
    eigenvalues: np.ndarray
    lipschitz: Optional[float]
    strategy: str
    tie_adjusted: bool = False
    split: Optional[str] = None
    candidates: Dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ('h0', 'h1', 'g0', 'g1', 'y', 'eigenvalues'):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        n = self.eigenvalues.size
        for name in ('h0', 'h1', 'g0', 'g1', 'y'):
            if getattr(self, name).shape != (n,):
                raise LengthMismatchError(f"{name} must have length {n}")

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def is_orthogonal(self) -> bool:
        return self.kind == KIND_ORTHOGONAL

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'n': self.n,
            'eigenvalues': self.eigenvalues.tolist(),
            'h0': self.h0.tolist(),
            'h1': self.h1.tolist(),
            'g0': self.g0.tolist(),
            'g1': self.g1.tolist(),
            'y': self.y.tolist(),
            'lipschitz': self.lipschitz,
            'strategy': self.strategy,
            'tie_adjusted': self.tie_adjusted,
            'split': self.split,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'FilterBank':
        try:
            bank = cls(
                h0=data['h0'],
                h1=data['h1'],
                g0=data['g0'],
                g1=data['g1'],
                kind=data['kind'],
                y=data['y'],
                eigenvalues=data['eigenvalues'],
                lipschitz=data.get('lipschitz'),
                strategy=data.get('strategy', ''),
                tie_adjusted=bool(data.get('tie_adjusted', False)),
                split=data.get('split'),
            )
        except KeyError as exc:
            raise InvalidParamError(f"Filter bank record is missing field {exc}") from exc
        if 'n' in data and int(data['n']) != bank.n:
            raise LengthMismatchError(f"Filter bank declares n={data['n']} but holds {bank.n} values")
        return bank


@dataclass(frozen=True)
class PRReport:
    sum_residual: float
    mirror_residual: float
    orthogonal_residual: Optional[float]
    tolerance: float = PR_TOL

    @property
    def passed(self) -> bool:
        residuals = [self.sum_residual, self.mirror_residual]
        if self.orthogonal_residual is not None:
            residuals.append(self.orthogonal_residual)
        return all(r <= self.tolerance for r in residuals)

    def to_dict(self) -> dict:
        return {
            'sum_residual': self.sum_residual,
            'mirror_residual': self.mirror_residual,
            'orthogonal_residual': self.orthogonal_residual,
            'tolerance': self.tolerance,
            'passed': self.passed,
        }


def _as_eigenvalues(eigenvalues: Sequence[float]) -> np.ndarray:
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 1 or lam.size < 2:
        raise InvalidParamError("Need an eigenvalue vector with at least 2 entries")
    if np.any(np.diff(lam) < 0):
        raise InvalidParamError("Eigenvalues must be ascending")
    return lam


def minmax_allocation(a: Sequence[float], b: float) -> np.ndarray:
    """
    Minimize ``max(x)`` subject to ``a . x = b`` and ``x >= 0``.

    The optimum spreads ``b`` evenly over the support of ``a``:
    ``x_i = b / sum(a[a != 0])`` where ``a_i != 0`` and 0 elsewhere.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise InvalidParamError("Allocation weights must be a vector")
    if np.any(a < 0) or not np.all(np.isfinite(a)):
        raise InvalidParamError("Allocation weights must be finite and nonnegative")
    support = a != 0
    if not support.any():
        if b == 0:
            return np.zeros_like(a)
        raise InfeasibleError("No nonzero weight to carry the allocation")
    if b < 0:
        raise InfeasibleError(f"Nonnegative weights cannot sum to b={b}")
    x = np.zeros_like(a)
    x[support] = b / a[support].sum()
    return x


def mirror_profile(lower: np.ndarray, n: int) -> np.ndarray:
    """Complete ``y`` from its first ``s`` entries using ``y[n-1-i] = 2 - y[i]``."""
    s, r = channel_sizes(n)
    y = np.empty(n)
    y[:s] = lower[:s]
    if n % 2:
        y[s - 1] = 1.0
    y[n - 1:n - 1 - r:-1] = 2.0 - y[:r]
    return y


def tie_clusters(eigenvalues: np.ndarray) -> List[np.ndarray]:
    """
    Index clusters joined by eigenvalue ties and by ties of the mirrored
    indices. Both relations split indices into runs, so a cluster boundary
    sits wherever neither relation joins two neighbours.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    tied = np.diff(lam) <= tie_tolerance(lam)
    joined = tied | tied[::-1]
    breaks = np.flatnonzero(~joined) + 1
    return np.split(np.arange(lam.size), breaks)


def enforce_ties(y: np.ndarray, eigenvalues: np.ndarray) -> np.ndarray:
    """Average ``y`` over each tie cluster, then re-mirror exactly."""
    n = y.size
    out = y.astype(float).copy()
    for cluster in tie_clusters(eigenvalues):
        mirror = np.sort(n - 1 - cluster)
        if np.array_equal(mirror, cluster):
            if cluster.size > 1 or n % 2:
                out[cluster] = 1.0
            continue
        if cluster[0] > mirror[0]:
            continue
        level = float(np.mean(out[cluster]))
        out[cluster] = level
        out[mirror] = 2.0 - level
    return out


def check_tie_consistency(values: np.ndarray, eigenvalues: np.ndarray, what: str = "profile") -> None:
    tol = PROFILE_TIE_TOL * max(1.0, float(np.max(np.abs(values), initial=0.0)))
    for group in tie_groups(eigenvalues):
        if group.size > 1 and np.ptp(values[group]) > tol:
            raise TieViolationError(
                f"{what} differs on tied eigenvalues at indices {group.tolist()}"
            )


def lipschitz_constant(h: Sequence[float], eigenvalues: Sequence[float]) -> float:
    """Largest slope of ``h`` between consecutive untied eigenvalues."""
    h = np.asarray(h, dtype=float)
    lam = np.asarray(eigenvalues, dtype=float)
    if h.shape != lam.shape:
        raise LengthMismatchError(f"Filter length {h.size} does not match {lam.size} eigenvalues")
    check_tie_consistency(h, lam, "Filter vector")
    gaps = np.diff(lam)
    untied = gaps > tie_tolerance(lam)
    if not untied.any():
        return 0.0
    return float(np.max(np.abs(np.diff(h))[untied] / gaps[untied]))


def _orthogonal_bank(
    y: np.ndarray,
    lam: np.ndarray,
    strategy: str,
    tie_adjusted: bool = False,
    candidates: Optional[Dict[str, float]] = None,
) -> FilterBank:
    y = np.clip(y, 0.0, 2.0)
    h0 = np.sqrt(y)
    h1 = h0[::-1].copy()
    return FilterBank(
        h0=h0,
        h1=h1,
        g0=h0,
        g1=h1,
        kind=KIND_ORTHOGONAL,
        y=y,
        eigenvalues=lam,
        lipschitz=lipschitz_constant(h0, lam),
        strategy=strategy,
        tie_adjusted=tie_adjusted,
        candidates=candidates or {},
    )


def design_ideal(eigenvalues: Sequence[float]) -> FilterBank:
    """Half-band orthogonal bank: ``y = 2`` below the channel split, 0 above."""
    lam = _as_eigenvalues(eigenvalues)
    n = lam.size
    s, _ = channel_sizes(n)
    lower = np.full(s, 2.0)
    if n % 2:
        lower[-1] = 1.0
    y = mirror_profile(lower, n)

    tie_adjusted = False
    for cluster in tie_clusters(lam):
        if np.ptp(y[cluster]) > 0:
            y[cluster] = 1.0
            y[np.sort(n - 1 - cluster)] = 1.0
            tie_adjusted = True
    if tie_adjusted:
        logger.warning("Ideal profile straddles tied eigenvalues; tied block set to y=1")
    return _orthogonal_bank(y, lam, STRATEGY_IDEAL, tie_adjusted=tie_adjusted)


def candidate_profiles(eigenvalues: Sequence[float]) -> Dict[str, np.ndarray]:
    """
    Both smooth minmax-slope profiles, keyed by strategy name. A strategy whose
    eigenvalue span is zero is left out.

    alpha: ``sqrt(y)`` falls linearly in lambda from sqrt(2) at 0 to 1 at lambda_s.
    beta: ``sqrt(y)`` on the upper half falls linearly from 1 at lambda_{r+1}
    to 0 at lambda_N. Each slope is the min-max allocation of the total drop
    over the eigenvalue gaps.
    """
    lam = _as_eigenvalues(eigenvalues)
    n = lam.size
    s, r = channel_sizes(n)
    profiles: Dict[str, np.ndarray] = {}

    gaps = np.diff(lam[:s])
    try:
        slope = minmax_allocation(gaps, SQRT2 - 1.0)
    except InfeasibleError:
        logger.debug("alpha strategy undefined: lambda_s is zero")
    else:
        h_low = SQRT2 - np.concatenate(([0.0], np.cumsum(gaps * slope)))
        lower = np.clip(h_low ** 2, 1.0, 2.0)
        lower[0] = 2.0
        profiles[STRATEGY_ALPHA] = mirror_profile(lower, n)

    gaps = np.diff(lam[r:])
    try:
        slope = minmax_allocation(gaps, 1.0)
    except InfeasibleError:
        logger.debug("beta strategy undefined: lambda_N equals lambda_{r+1}")
    else:
        h_high = 1.0 - np.concatenate(([0.0], np.cumsum(gaps * slope)))
        upper = np.clip(h_high ** 2, 0.0, 1.0)
        upper[-1] = 0.0
        lower = 2.0 - upper[::-1]
        profiles[STRATEGY_BETA] = mirror_profile(lower, n)

    return {name: enforce_ties(y, lam) for name, y in profiles.items()}


def design_local(eigenvalues: Sequence[float]) -> FilterBank:
    """
    Smooth orthogonal bank: of the alpha and beta profiles, keep the one whose
    ``h0`` has the smaller Lipschitz constant (alpha on a tie).
    """
    lam = _as_eigenvalues(eigenvalues)
    n = lam.size
    if n == 2:
        return _orthogonal_bank(np.array([2.0, 0.0]), lam, STRATEGY_TRIVIAL)

    profiles = candidate_profiles(lam)
    if not profiles:
        raise DegenerateSpectrumError("Neither smooth strategy is defined for this spectrum")

    banks = {name: _orthogonal_bank(y, lam, name) for name, y in profiles.items()}
    scores = {name: bank.lipschitz for name, bank in banks.items()}
    best = STRATEGY_ALPHA if STRATEGY_ALPHA in banks else STRATEGY_BETA
    for name, score in scores.items():
        if score < scores[best] - PROFILE_TIE_TOL:
            best = name
    logger.debug("Local design candidates %s, picked %s", scores, best)
    return _orthogonal_bank(profiles[best], lam, best, candidates=scores)


def complete_profile(f_free: Sequence[float], n: int) -> np.ndarray:
    """Extend ``f(1..r)`` to length ``n`` by ``f[n-1-k] = 2 - f[k]`` (middle 1 when odd)."""
    f_free = np.asarray(f_free, dtype=float)
    s, r = channel_sizes(n)
    if f_free.shape != (r,):
        raise LengthMismatchError(f"Expected {r} free profile values for n={n}, got {f_free.size}")
    if np.any(f_free <= 0.0) or np.any(f_free >= 2.0):
        raise OutOfRangeError("Free profile values must lie strictly inside (0, 2)")
    lower = np.ones(s)
    lower[:r] = f_free
    return mirror_profile(lower, n)


def design_biorthogonal(
    eigenvalues: Sequence[float],
    f_free: Sequence[float],
    split: str = SPLIT_SQRT,
) -> FilterBank:
    """
    General perfect-reconstruction bank from a free profile ``f``.

    ``h0 * g0 = f`` is split either evenly (``sqrt``) or as ``h0 = f, g0 = 1``
    (``uneven``); the highpass pair follows from ``h1[k] = g0[n-1-k]`` and
    ``g1[k] = h0[n-1-k]``.
    """
    lam = _as_eigenvalues(eigenvalues)
    if split not in SPLITS:
        raise InvalidParamError(f"Unknown split rule {split!r}; expected one of {SPLITS}")
    f = complete_profile(f_free, lam.size)
    if split == SPLIT_SQRT:
        h0 = np.sqrt(f)
        g0 = h0.copy()
    else:
        h0 = f.copy()
        g0 = np.ones_like(f)
    try:
        lipschitz = lipschitz_constant(h0, lam)
    except TieViolationError:
        lipschitz = None
    return FilterBank(
        h0=h0,
        h1=g0[::-1],
        g0=g0,
        g1=h0[::-1],
        kind=KIND_BIORTHOGONAL,
        y=f,
        eigenvalues=lam,
        lipschitz=lipschitz,
        strategy=DESIGN_BIOR,
        split=split,
    )


def random_free_profile(n: int, seed: int = 0) -> np.ndarray:
    """Seeded free profile with values in ``(BIOR_F_LOW, BIOR_F_HIGH)``."""
    _, r = channel_sizes(n)
    rng = np.random.default_rng(seed)
    return rng.uniform(BIOR_F_LOW, BIOR_F_HIGH, size=r)


def design_filter_bank(
    design: str,
    eigenvalues: Sequence[float],
    seed: int = 0,
    split: str = SPLIT_SQRT,
    f_free: Optional[Sequence[float]] = None,
) -> FilterBank:
    """Build a bank by design name."""
    if design == DESIGN_IDEAL:
        return design_ideal(eigenvalues)
    if design == DESIGN_LOCAL:
        return design_local(eigenvalues)
    if design == DESIGN_BIOR:
        if f_free is None:
            f_free = random_free_profile(len(eigenvalues), seed)
        return design_biorthogonal(eigenvalues, f_free, split=split)
    raise InvalidParamError(f"Unknown design {design!r}; expected one of {DESIGNS}")


def verify_pr_conditions(bank: FilterBank) -> PRReport:
    """Residuals of both Hadamard conditions, plus ``h0^2 + h1^2 = 2`` for orthogonal banks."""
    h0, h1, g0, g1 = bank.h0, bank.h1, bank.g0, bank.g1
    sum_residual = float(np.max(np.abs(g0 * h0 + g1 * h1 - 2.0)))
    mirror_residual = float(np.max(np.abs(g0[::-1] * h0 - g1[::-1] * h1)))
    orthogonal_residual = None
    if bank.is_orthogonal:
        orthogonal_residual = float(max(
            np.max(np.abs(h0 ** 2 + h1 ** 2 - 2.0)),
            np.max(np.abs(h0 - g0)),
            np.max(np.abs(h1 - g1)),
        ))
    return PRReport(sum_residual, mirror_residual, orthogonal_residual)
