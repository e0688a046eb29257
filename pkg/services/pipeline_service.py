from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd

from config import get_logger
from constants import (
    COMMUNITY_DEFAULT_P_IN,
    COMMUNITY_DEFAULT_P_OUT,
    DESIGN_BIOR,
    DESIGN_IDEAL,
    DESIGN_LOCAL,
    PR_TOL,
    REMEZ_DEFAULT_TARGET,
    SENSOR_DEFAULT_RADIUS,
    SPLIT_SQRT,
)
from filterbank.design import FilterBank, design_filter_bank, verify_pr_conditions
from filterbank.errors import InvalidParamError
from filterbank.graph import Graph, gen_community, gen_ring, gen_sensor, hop_distances, laplacian
from filterbank.mallat import (
    PyramidCoefficients,
    analyze,
    build_level,
    build_pyramid,
    check_bank_matches,
    multilevel_analyze,
    multilevel_synthesize,
    synthesize,
)
from filterbank.metrics import (
    dirichlet_bound_check,
    impulse_response,
    lowpass_error,
    lowpass_error_bound,
    rel_error,
    snr,
)
from filterbank.polyapprox import FilterPolynomial, error_bound, remez_fit
from filterbank.sampler import sampler_residuals
from filterbank.spectral import SpectralDecomposition
from filterbank.utils import (
    metrics_frame,
    read_coeffs,
    read_graph,
    read_json,
    read_signal,
    write_coeffs,
    write_csv,
    write_graph,
    write_json,
    write_signal,
)
from services.eig_cache import cached_eig_sym

logger = get_logger(__name__)

PathLike = Union[str, Path]
CHANNELS = ('h0', 'h1', 'g0', 'g1')
VERIFY_DESIGNS = (DESIGN_IDEAL, DESIGN_LOCAL, DESIGN_BIOR)


def generate_graph(
    kind: str,
    n: int,
    seed: int = 0,
    radius: float = SENSOR_DEFAULT_RADIUS,
    blocks: Optional[int] = None,
    p_in: float = COMMUNITY_DEFAULT_P_IN,
    p_out: float = COMMUNITY_DEFAULT_P_OUT,
) -> Graph:
    if kind == 'ring':
        return gen_ring(n)
    if kind == 'sensor':
        return gen_sensor(n, seed=seed, radius=radius)
    if kind == 'community':
        return gen_community(n, seed=seed, blocks=blocks, p_in=p_in, p_out=p_out)
    raise InvalidParamError(f"Unknown generator {kind!r}")


def load_graph(path: PathLike) -> Tuple[Graph, SpectralDecomposition]:
    """Read a graph file and its (possibly cached) eigendecomposition."""
    g = read_graph(path)
    return g, cached_eig_sym(laplacian(g))


def load_bank(path: PathLike, sd: SpectralDecomposition) -> FilterBank:
    bank = FilterBank.from_dict(read_json(path))
    check_bank_matches(bank, sd)
    return bank


def resolve_bank(
    sd: SpectralDecomposition,
    design: str = DESIGN_LOCAL,
    bank_path: Optional[PathLike] = None,
    seed: int = 0,
    split: str = SPLIT_SQRT,
) -> FilterBank:
    """A bank file takes precedence over a design name."""
    if bank_path:
        return load_bank(bank_path, sd)
    return design_filter_bank(design, sd.eigenvalues, seed=seed, split=split)


def _random_signal(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(n)


class PipelineService:
    """File-level operations behind the command-line interface."""

    @staticmethod
    def gen(kind: str, n: int, out: PathLike, **params) -> Graph:
        g = generate_graph(kind, n, **params)
        write_graph(g, out)
        logger.info("Wrote %s graph with %d vertices to %s", kind, g.n, out)
        return g

    @staticmethod
    def design(
        graph_path: PathLike,
        design: str = DESIGN_LOCAL,
        out: Optional[PathLike] = None,
        seed: int = 0,
        split: str = SPLIT_SQRT,
    ) -> FilterBank:
        _, sd = load_graph(graph_path)
        bank = design_filter_bank(design, sd.eigenvalues, seed=seed, split=split)
        report = verify_pr_conditions(bank)
        if not report.passed:
            logger.warning("Designed bank fails the reconstruction check: %s", report.to_dict())
        if out:
            write_json(bank.to_dict(), out)
            logger.info("Wrote %s filter bank to %s", design, out)
        return bank

    @staticmethod
    def analyze(
        graph_path: PathLike,
        signal_path: PathLike,
        out: Optional[PathLike] = None,
        depth: int = 1,
        design: str = DESIGN_LOCAL,
        bank_path: Optional[PathLike] = None,
        seed: int = 0,
        split: str = SPLIT_SQRT,
    ) -> PyramidCoefficients:
        g, sd = load_graph(graph_path)
        x = read_signal(signal_path)
        bank = resolve_bank(sd, design, bank_path, seed, split)
        pyramid = build_pyramid(
            g, depth, design=design, eig=cached_eig_sym, seed=seed, split=split,
            bank=bank, spectral=sd,
        )
        coeffs = multilevel_analyze(pyramid, x)
        if out:
            write_coeffs(coeffs.to_vector(), coeffs.lengths, out)
            logger.info("Wrote %d coefficients in blocks %s to %s", sum(coeffs.lengths), coeffs.lengths, out)
        return coeffs

    @staticmethod
    def synthesize(
        graph_path: PathLike,
        coeffs_path: PathLike,
        out: Optional[PathLike] = None,
        design: str = DESIGN_LOCAL,
        bank_path: Optional[PathLike] = None,
        seed: int = 0,
        split: str = SPLIT_SQRT,
    ) -> np.ndarray:
        g, sd = load_graph(graph_path)
        values, lengths = read_coeffs(coeffs_path)
        coeffs = PyramidCoefficients.from_vector(values, lengths)
        bank = resolve_bank(sd, design, bank_path, seed, split)
        pyramid = build_pyramid(
            g, coeffs.depth, design=design, eig=cached_eig_sym, seed=seed, split=split,
            bank=bank, spectral=sd,
        )
        x = multilevel_synthesize(pyramid, coeffs)
        if out:
            write_signal(x, out)
            logger.info("Wrote reconstructed signal to %s", out)
        return x

    @staticmethod
    def metrics(
        original_path: PathLike,
        recon_path: PathLike,
        out: Optional[PathLike] = None,
        csv_out: Optional[PathLike] = None,
    ) -> Dict[str, float]:
        f = read_signal(original_path)
        fr = read_signal(recon_path)
        record = {'re': rel_error(f, fr), 'snr': snr(f, fr)}
        if out:
            write_json(record, out)
        if csv_out:
            write_csv(metrics_frame(record), csv_out)
        return record

    @staticmethod
    def polyfit(
        graph_path: PathLike,
        degree: int,
        design: str = DESIGN_LOCAL,
        bank_path: Optional[PathLike] = None,
        channel: str = 'h0',
        target: str = REMEZ_DEFAULT_TARGET,
        out: Optional[PathLike] = None,
        seed: int = 0,
    ) -> FilterPolynomial:
        if channel not in CHANNELS:
            raise InvalidParamError(f"Unknown channel {channel!r}; expected one of {CHANNELS}")
        _, sd = load_graph(graph_path)
        bank = resolve_bank(sd, design, bank_path, seed)
        fp = remez_fit(sd.eigenvalues, getattr(bank, channel), degree, target=target)
        if out:
            write_json(fp.to_dict(), out)
            logger.info("Wrote degree-%d fit of %s (sup error %.3g) to %s", degree, channel, fp.sup_error, out)
        return fp

    @staticmethod
    def locality(
        graph_path: PathLike,
        vertex: int,
        design: str = DESIGN_LOCAL,
        bank_path: Optional[PathLike] = None,
        poly_path: Optional[PathLike] = None,
        degree: Optional[int] = None,
        target: str = REMEZ_DEFAULT_TARGET,
        out: Optional[PathLike] = None,
        seed: int = 0,
    ) -> pd.DataFrame:
        """
        Impulse response at ``vertex`` with hop distances. The filter is a
        stored polynomial, a degree-``degree`` fit of the bank's ``h0``, or
        ``h0`` itself.
        """
        g, sd = load_graph(graph_path)
        if poly_path:
            filt = FilterPolynomial.from_dict(read_json(poly_path))
        else:
            bank = resolve_bank(sd, design, bank_path, seed)
            filt = remez_fit(sd.eigenvalues, bank.h0, degree, target=target) if degree else bank.h0
        response = impulse_response(g, sd, filt, vertex)
        df = pd.DataFrame({
            'vertex': np.arange(g.n),
            'hops': hop_distances(g, vertex),
            'response': response,
        })
        if out:
            write_csv(df, out)
            logger.info("Wrote impulse response at vertex %d to %s", vertex, out)
        return df

    @staticmethod
    def verify(graph_path: PathLike, seed: int = 0, degree: int = 5) -> dict:
        """Run the reconstruction, sampler and bound checks for every design."""
        g, sd = load_graph(graph_path)
        x = _random_signal(g.n, seed)
        report = {'n': g.n, 'lambda_max': sd.lambda_max, 'designs': {}}
        passed = True
        for design in VERIFY_DESIGNS:
            lt = build_level(g, design=design, spectral=sd, eig=cached_eig_sym, seed=seed)
            residuals = sampler_residuals(sd, lt.samplers)
            pr = verify_pr_conditions(lt.bank)
            y_low, z_high = analyze(lt, x)
            roundtrip = rel_error(x, synthesize(lt, y_low, z_high))
            entry = {
                'samplers': residuals,
                'pr': pr.to_dict(),
                'roundtrip_re': roundtrip,
                'strategy': lt.bank.strategy,
            }
            ok = pr.passed and roundtrip <= PR_TOL and max(residuals.values()) <= PR_TOL

            if abs(lt.bank.g0[-1]) <= PR_TOL:
                parts = lowpass_error_bound(lt.bank, sd, x)
                measured = lowpass_error(lt.bank, sd, x)
                relaxed = dirichlet_bound_check(lt.bank, sd, x)
                entry['lowpass'] = {
                    'error': measured,
                    **parts.to_dict(),
                    'relaxed_bound': relaxed.rhs,
                }
                ok = ok and measured <= parts.bound + PR_TOL and relaxed.holds

            if lt.bank.lipschitz is not None and degree < g.n:
                fp = remez_fit(sd.eigenvalues, lt.bank.h0, degree)
                bound = error_bound(lt.bank.lipschitz, sd.lambda_max, degree)
                entry['polynomial'] = {'degree': degree, 'sup_error': fp.sup_error, 'bound': bound}
                ok = ok and fp.sup_error <= bound + PR_TOL

            entry['passed'] = ok
            passed = passed and ok
            report['designs'][design] = entry
        report['passed'] = passed
        logger.info("Verification on %s: %s", graph_path, "passed" if passed else "FAILED")
        return report
