"""Command-line interface: ``synth``, ``simulate`` and ``evaluate``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .data_core import DataError, DataMatrix, load_csv, load_schema, write_csv
from .evaluate import build_report, parse_regression
from .generators import DESIGNS, SimSpec, generate
from .local_models import FAMILIES
from .report import write_report
from .synthesizer import CLIPPING_POLICIES, ROUNDING_MODES, SynthConfig, synthesize


class CliError(Exception):
    pass


def _add_synth_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("synthesis")
    g.add_argument("--k", type=int, default=15, help="neighbours per subsample (default 15)")
    g.add_argument("--n-prime", type=int, default=None,
                   help="synthetic sample size (default: input size)")
    g.add_argument("--family", choices=FAMILIES, default="mvn")
    g.add_argument("--no-resample", dest="resample", action="store_false",
                   help="use every subsample once instead of resampling them")
    g.add_argument("--raw-distances", dest="standardize", action="store_false",
                   help="search neighbours on raw values instead of z-scores")
    g.add_argument("--rounding", choices=ROUNDING_MODES, default="unbiased")
    g.add_argument("--clipping", choices=CLIPPING_POLICIES, default="observed_range")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--figures", type=Path, default=None, metavar="DIR",
                   help="also render comparison figures (PNG) into DIR")


def _config(args) -> SynthConfig:
    try:
        return SynthConfig(
            k=args.k, n_prime=args.n_prime, family=args.family,
            resample_subsamples=args.resample, standardize_distances=args.standardize,
            rounding=args.rounding, clipping=args.clipping, seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localresampler",
        description="Synthetic tabular data from locally fitted neighbour distributions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a CSV file")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, default=None,
                   help="synthetic CSV (default: <input>_synthetic.csv)")
    p.add_argument("--report", type=Path, default=None,
                   help="report path; a .json twin is written next to it "
                        "(default: <input>_report.txt)")
    p.add_argument("--schema", type=Path, default=None, help="schema sidecar file")
    p.add_argument("--regression", default=None, metavar="SPEC",
                   help="compare OLS fits, e.g. 'y ~ a + b'")
    _add_synth_flags(p)

    p = sub.add_parser("simulate", help="generate a simulated design and synthesize it")
    p.add_argument("design", help=f"one of: {', '.join(DESIGNS)}")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--outdir", type=Path, default=Path("."))
    _add_synth_flags(p)

    p = sub.add_parser("evaluate", help="compare two CSV files with the same columns")
    p.add_argument("original", type=Path)
    p.add_argument("synthetic", type=Path)
    p.add_argument("--regression", default=None, metavar="SPEC")
    p.add_argument("--report", type=Path, default=Path("report.txt"))
    p.add_argument("--figures", type=Path, default=None, metavar="DIR")
    return parser


def _figures(args, original, synthetic, report, stem):
    if args.figures is None:
        return []
    from .plotting import write_figures
    return write_figures(original, synthetic, report, args.figures, stem)


def _meta(config: SynthConfig | None, **extra) -> dict:
    meta = dict(extra)
    if config is not None:
        meta.update({f"config.{k}": v for k, v in config.as_dict().items()})
    return meta


def _run_synthesis(data: DataMatrix, config: SynthConfig) -> DataMatrix:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = synthesize(data, config)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return result.synthetic


def cmd_synth(args) -> int:
    config = _config(args)
    schema = load_schema(args.schema) if args.schema else None
    data = load_csv(args.input, schema)
    regression = parse_regression(args.regression) if args.regression else None
    if regression is not None:
        missing = [c for c in (regression.response, *regression.terms) if c not in data.names]
        if missing:
            raise CliError(f"regression spec names unknown column(s): {', '.join(missing)}")
    if config.k > data.n:
        raise CliError(f"k={config.k} exceeds the number of rows n={data.n} in {args.input}")
    stem = args.input.with_suffix("")
    out = args.output or Path(f"{stem}_synthetic.csv")
    report_path = args.report or Path(f"{stem}_report.txt")
    synthetic = _run_synthesis(data, config)
    write_csv(synthetic, out)
    report = build_report(data, synthetic, regression)
    write_report(report, report_path,
                 _meta(config, input=args.input.name, output=out.name, n=data.n,
                       n_synthetic=synthetic.n))
    _figures(args, data, synthetic, report, args.input.stem)
    return 0


def cmd_simulate(args) -> int:
    if args.design not in DESIGNS:
        raise CliError(f"unknown design {args.design!r}; valid designs: {', '.join(DESIGNS)}")
    config = _config(args)
    try:
        spec = SimSpec(args.design, args.n, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    original = generate(spec)
    synthetic = _run_synthesis(original, config)
    args.outdir.mkdir(parents=True, exist_ok=True)
    orig_path = args.outdir / f"{spec.design}_original.csv"
    synth_path = args.outdir / f"{spec.design}_synthetic.csv"
    write_csv(original, orig_path)
    write_csv(synthetic, synth_path)
    report = build_report(original, synthetic)
    write_report(report, args.outdir / f"{spec.design}_report.txt",
                 _meta(config, design=spec.design, n=spec.n))
    _figures(args, original, synthetic, report, spec.design)
    return 0


def cmd_evaluate(args) -> int:
    a = load_csv(args.original)
    b = load_csv(args.synthetic)
    if a.names != b.names:
        raise CliError(f"column mismatch: {a.names} vs {b.names}")
    regression = parse_regression(args.regression) if args.regression else None
    report = build_report(a, b, regression)
    write_report(report, args.report,
                 _meta(None, original=args.original.name, synthetic=args.synthetic.name))
    _figures(args, a, b, report, args.synthetic.stem)
    return 0


COMMANDS = {"synth": cmd_synth, "simulate": cmd_simulate, "evaluate": cmd_evaluate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CliError, DataError, KeyError, ValueError, OSError,
            np.linalg.LinAlgError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
