#!/usr/bin/env python3
# cli.py
import argparse
import sys
from pathlib import Path

from config import get_logger
from constants import (
    COMMUNITY_DEFAULT_BLOCKS,
    COMMUNITY_DEFAULT_P_IN,
    COMMUNITY_DEFAULT_P_OUT,
    DESIGN_LOCAL,
    DESIGNS,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    GENERATORS,
    REMEZ_DEFAULT_TARGET,
    REMEZ_TARGETS,
    SENSOR_DEFAULT_RADIUS,
    SPLIT_SQRT,
    SPLITS,
)
from filterbank.errors import NumericalError
from filterbank.utils import dumps_json
from services.pipeline_service import CHANNELS, PipelineService

logger = get_logger(__name__)


def _add_bank_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--design", "-d", choices=DESIGNS, default=DESIGN_LOCAL,
                   help="Filter bank design (default: local)")
    p.add_argument("--bank", "-b", type=Path, default=None,
                   help="Filter bank JSON file; overrides --design on the finest level")
    p.add_argument("--seed", type=int, default=0, help="Seed for random biorthogonal profiles")
    p.add_argument("--split", choices=SPLITS, default=SPLIT_SQRT,
                   help="Biorthogonal factor split rule (default: sqrt)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="graphfb",
        description="Perfect-reconstruction two-channel filter banks on weighted graphs",
    )
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a graph file")
    gen.add_argument("kind", choices=GENERATORS)
    gen.add_argument("n", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--radius", type=float, default=SENSOR_DEFAULT_RADIUS)
    gen.add_argument("--blocks", type=int, default=None, help=f"default: min({COMMUNITY_DEFAULT_BLOCKS}, n)")
    gen.add_argument("--p-in", type=float, default=COMMUNITY_DEFAULT_P_IN)
    gen.add_argument("--p-out", type=float, default=COMMUNITY_DEFAULT_P_OUT)
    gen.add_argument("--output", "-o", type=Path, required=True)

    design = sub.add_parser("design", help="Design a filter bank and print it as JSON")
    design.add_argument("graph", type=Path)
    _add_bank_options(design)
    design.add_argument("--output", "-o", type=Path, default=None)

    analyze = sub.add_parser("analyze", help="Multilevel analysis of a signal")
    analyze.add_argument("graph", type=Path)
    analyze.add_argument("signal", type=Path)
    analyze.add_argument("--depth", type=int, default=1)
    _add_bank_options(analyze)
    analyze.add_argument("--output", "-o", type=Path, required=True)

    synth = sub.add_parser("synthesize", help="Reconstruct a signal from coefficients")
    synth.add_argument("graph", type=Path)
    synth.add_argument("coeffs", type=Path)
    _add_bank_options(synth)
    synth.add_argument("--output", "-o", type=Path, required=True)

    metrics = sub.add_parser("metrics", help="SNR and relative error of a reconstruction")
    metrics.add_argument("original", type=Path)
    metrics.add_argument("reconstruction", type=Path)
    metrics.add_argument("--csv", type=Path, default=None, help="Also write a metric,value CSV")

    polyfit = sub.add_parser("polyfit", help="Best uniform polynomial fit of a filter")
    polyfit.add_argument("graph", type=Path)
    polyfit.add_argument("--degree", "-m", type=int, required=True)
    polyfit.add_argument("--channel", choices=CHANNELS, default="h0")
    polyfit.add_argument("--target", choices=REMEZ_TARGETS, default=REMEZ_DEFAULT_TARGET)
    _add_bank_options(polyfit)
    polyfit.add_argument("--output", "-o", type=Path, default=None)

    locality = sub.add_parser("locality", help="Impulse response with hop distances as CSV")
    locality.add_argument("graph", type=Path)
    locality.add_argument("--vertex", "-v", type=int, default=0)
    locality.add_argument("--poly", type=Path, default=None, help="Polynomial JSON from polyfit")
    locality.add_argument("--degree", "-m", type=int, default=None,
                          help="Fit h0 with a polynomial of this degree first")
    locality.add_argument("--target", choices=REMEZ_TARGETS, default=REMEZ_DEFAULT_TARGET)
    _add_bank_options(locality)
    locality.add_argument("--output", "-o", type=Path, default=None)

    verify = sub.add_parser("verify", help="Run the invariant checks on a graph")
    verify.add_argument("graph", type=Path)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--degree", "-m", type=int, default=5)
    return p


def parse_args(argv=None):
    return build_parser().parse_args(argv)


def run(args) -> int:
    if args.command == "gen":
        PipelineService.gen(
            args.kind, args.n, args.output, seed=args.seed, radius=args.radius,
            blocks=args.blocks, p_in=args.p_in, p_out=args.p_out,
        )
    elif args.command == "design":
        bank = PipelineService.design(
            args.graph, args.design, out=args.output, seed=args.seed, split=args.split,
        )
        print(dumps_json(bank.to_dict()))
    elif args.command == "analyze":
        PipelineService.analyze(
            args.graph, args.signal, out=args.output, depth=args.depth, design=args.design,
            bank_path=args.bank, seed=args.seed, split=args.split,
        )
    elif args.command == "synthesize":
        PipelineService.synthesize(
            args.graph, args.coeffs, out=args.output, design=args.design,
            bank_path=args.bank, seed=args.seed, split=args.split,
        )
    elif args.command == "metrics":
        record = PipelineService.metrics(args.original, args.reconstruction, csv_out=args.csv)
        print(dumps_json(record))
    elif args.command == "polyfit":
        fp = PipelineService.polyfit(
            args.graph, args.degree, design=args.design, bank_path=args.bank,
            channel=args.channel, target=args.target, out=args.output, seed=args.seed,
        )
        print(dumps_json(fp.to_dict()))
    elif args.command == "locality":
        df = PipelineService.locality(
            args.graph, args.vertex, design=args.design, bank_path=args.bank,
            poly_path=args.poly, degree=args.degree, target=args.target, out=args.output, seed=args.seed,
        )
        if args.output is None:
            sys.stdout.write(df.to_csv(index=False))
    elif args.command == "verify":
        report = PipelineService.verify(args.graph, seed=args.seed, degree=args.degree)
        print(dumps_json(report))
        return EXIT_OK if report['passed'] else EXIT_NUMERIC
    return EXIT_OK


def main(argv=None):
    args = parse_args(argv)
    try:
        return run(args)
    except NumericalError as exc:
        logger.error("Numerical failure: %s", exc)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        logger.error("Processing failed: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
