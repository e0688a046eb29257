# filterbank/mallat.py
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import get_logger
from constants import DESIGN_LOCAL, SPLIT_SQRT, TIE_RTOL
from .coarsen import CoarseMap, coarse_basis, coarsen
from .design import FilterBank, design_filter_bank
from .errors import InvalidDepthError, LengthMismatchError, ShapeMismatchError
from .graph import Graph, laplacian
from .sampler import SamplerSet, make_samplers
from .spectral import SpectralDecomposition, apply_filter, eig_sym

logger = get_logger(__name__)

EigSolver = Callable[[np.ndarray], SpectralDecomposition]


@dataclass(frozen=True)
class LevelTransform:
    graph: Graph
    spectral: SpectralDecomposition
    bank: FilterBank
    samplers: SamplerSet
    coarse: CoarseMap

    @property
    def n(self) -> int:
        return self.graph.n


def _vector(values, length: int, what: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (length,):
        raise LengthMismatchError(f"{what} has shape {v.shape}, expected ({length},)")
    return v


def check_bank_matches(bank: FilterBank, sd: SpectralDecomposition) -> None:
    """Refuse a bank designed for a different spectrum."""
    if bank.n != sd.n:
        raise LengthMismatchError(f"Filter bank has n={bank.n}, graph has n={sd.n}")
    scale = max(1.0, sd.lambda_max)
    if np.max(np.abs(bank.eigenvalues - sd.eigenvalues)) > TIE_RTOL * scale:
        raise ShapeMismatchError("Filter bank eigenvalues do not match the graph spectrum")


def build_level(
    g: Graph,
    design: str = DESIGN_LOCAL,
    bank: Optional[FilterBank] = None,
    spectral: Optional[SpectralDecomposition] = None,
    eig: EigSolver = eig_sym,
    seed: int = 0,
    split: str = SPLIT_SQRT,
) -> LevelTransform:
    """One analysis/synthesis stage on ``g``; ``U1`` comes from the coarse graph."""
    sd = spectral if spectral is not None else eig(laplacian(g))
    if bank is None:
        bank = design_filter_bank(design, sd.eigenvalues, seed=seed, split=split)
    check_bank_matches(bank, sd)
    cm = coarsen(g)
    samplers = make_samplers(sd, coarse_basis(cm, eig=eig))
    return LevelTransform(graph=g, spectral=sd, bank=bank, samplers=samplers, coarse=cm)


def analyze(lt: LevelTransform, x: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Split ``x`` into lowpass ``A_L F_h0 x`` and highpass ``A_H F_h1 x`` coefficients."""
    x = _vector(x, lt.n, "Signal")
    y_low = lt.samplers.A_L @ apply_filter(lt.spectral, lt.bank.h0, x)
    z_high = lt.samplers.A_H @ apply_filter(lt.spectral, lt.bank.h1, x)
    return y_low, z_high


def synthesize(lt: LevelTransform, y_low: Sequence[float], z_high: Sequence[float]) -> np.ndarray:
    y_low = _vector(y_low, lt.samplers.s, "Lowpass coefficients")
    z_high = _vector(z_high, lt.samplers.r, "Highpass coefficients")
    low = apply_filter(lt.spectral, lt.bank.g0, lt.samplers.B_L @ y_low)
    high = apply_filter(lt.spectral, lt.bank.g1, lt.samplers.B_H @ z_high)
    return low + high


def lowpass_reconstruct(lt: LevelTransform, y_low: Sequence[float]) -> np.ndarray:
    """Synthesis from the lowpass channel alone."""
    y_low = _vector(y_low, lt.samplers.s, "Lowpass coefficients")
    return apply_filter(lt.spectral, lt.bank.g0, lt.samplers.B_L @ y_low)


def analysis_matrix(lt: LevelTransform) -> np.ndarray:
    """Stacked ``[A_L F_h0; A_H F_h1]`` as an explicit N x N matrix."""
    U = lt.spectral.basis
    low = lt.samplers.A_L @ (U * lt.bank.h0) @ U.T
    high = lt.samplers.A_H @ (U * lt.bank.h1) @ U.T
    return np.vstack([low, high])


@dataclass(frozen=True)
class Pyramid:
    """Chain of levels; each level's graph is the previous level's coarse graph."""
    levels: Tuple[LevelTransform, ...]

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def sizes(self) -> List[int]:
        return [lt.n for lt in self.levels]

    def coefficient_lengths(self) -> List[int]:
        """Lengths in layout order: coarsest lowpass, then highpass coarsest to finest."""
        lengths = [self.levels[-1].samplers.s]
        lengths.extend(lt.samplers.r for lt in reversed(self.levels))
        return lengths


def build_pyramid(
    g: Graph,
    depth: int,
    design: str = DESIGN_LOCAL,
    eig: EigSolver = eig_sym,
    seed: int = 0,
    split: str = SPLIT_SQRT,
    bank: Optional[FilterBank] = None,
    spectral: Optional[SpectralDecomposition] = None,
) -> Pyramid:
    """
    Build ``depth`` levels, stopping early (with a warning) once the coarse
    chain reaches a single vertex. A given ``bank`` is used on the finest
    level only; coarser levels are designed by name.
    """
    if depth < 1:
        raise InvalidDepthError(f"Depth must be >= 1, got {depth}")
    levels = [build_level(
        g, design=design, bank=bank, spectral=spectral, eig=eig, seed=seed, split=split,
    )]
    while len(levels) < depth:
        coarse = levels[-1].coarse
        if coarse.trivial:
            logger.warning(
                "Requested depth %d truncated to %d: coarse graph has a single vertex",
                depth, len(levels),
            )
            break
        levels.append(build_level(
            coarse.coarse_graph, design=design, eig=eig, seed=seed + len(levels), split=split,
        ))
    pyramid = Pyramid(tuple(levels))
    logger.info("Built %s pyramid with level sizes %s", design, pyramid.sizes)
    return pyramid


@dataclass(frozen=True)
class PyramidCoefficients:
    """Coarsest lowpass block plus highpass blocks ordered coarsest to finest."""
    lowpass: np.ndarray
    details: Tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.details)

    @property
    def lengths(self) -> List[int]:
        return [self.lowpass.size] + [d.size for d in self.details]

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.lowpass, *self.details])

    @classmethod
    def from_vector(cls, values: Sequence[float], lengths: Sequence[int]) -> 'PyramidCoefficients':
        values = np.asarray(values, dtype=float)
        lengths = [int(v) for v in lengths]
        if len(lengths) < 2 or any(v < 0 for v in lengths):
            raise ShapeMismatchError(f"Invalid coefficient block lengths {lengths}")
        if values.ndim != 1 or values.size != sum(lengths):
            raise ShapeMismatchError(
                f"Expected {sum(lengths)} coefficients for blocks {lengths}, got {values.size}"
            )
        blocks = np.split(values, np.cumsum(lengths)[:-1])
        return cls(lowpass=blocks[0], details=tuple(blocks[1:]))


def multilevel_analyze(p: Pyramid, x: Sequence[float]) -> PyramidCoefficients:
    """Cascade ``analyze`` down the lowpass branch."""
    current = np.asarray(x, dtype=float)
    if current.shape != (p.levels[0].n,):
        raise ShapeMismatchError(f"Signal has shape {current.shape}, expected ({p.levels[0].n},)")
    details = []
    for lt in p.levels:
        current, z_high = analyze(lt, current)
        details.append(z_high)
    return PyramidCoefficients(lowpass=current, details=tuple(reversed(details)))


def multilevel_synthesize(p: Pyramid, coeffs: PyramidCoefficients) -> np.ndarray:
    if coeffs.lengths != p.coefficient_lengths():
        raise ShapeMismatchError(
            f"Coefficient blocks {coeffs.lengths} do not fit pyramid {p.coefficient_lengths()}"
        )
    current = coeffs.lowpass
    for lt, z_high in zip(reversed(p.levels), coeffs.details):
        current = synthesize(lt, current, z_high)
    return current
