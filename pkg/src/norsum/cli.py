"""Command-line entry point.

    norsum <command> --sequence SPEC --alpha A --n-grid LO:HI:xF ...

Commands: convergence, norms, sharpness, growth, verify.  Exit codes:
0 success, 1 invariant violation or runtime failure (a machine-readable
error row is still emitted), 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, SummabilityError
from .experiments import (
    COMMANDS,
    CSV_HEADER,
    DEFAULT_GRID,
    ExperimentConfig,
    parse_grid,
    run,
    to_csv,
    to_json,
)

_COMMAND_HELP = {
    "convergence": "measure ||N_n[f] - f|| over the grid and fit a log-log rate",
    "norms": "spectral norms of the multiplier matrices with upper/lower bounds",
    "sharpness": "norms of even-order matrices at the endpoint exponent 1/2",
    "growth": "growth-rate and partial-sum-ratio diagnostics of a sequence",
    "verify": "run the built-in invariant suite and exit nonzero on violation",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="norsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=_COMMAND_HELP[name])
        p.add_argument("--sequence", default="ones",
                       help="ones | linear | monomial:K | geom:R | log | file:PATH")
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--n-grid", default=DEFAULT_GRID, metavar="LO:HI:xF|LO:HI:+S")
        p.add_argument("--weight", default="dirac:1,0",
                       help="dirac:RE,IM[,MASS] atoms joined by ';'")
        p.add_argument("--function", default="zeta2",
                       help="zeta2 | geo:R | file:PATH")
        p.add_argument("--ref-degree", type=int, default=4096)
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timings", action="store_true",
                       help="emit measured wall times (off by default so output is reproducible)")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        command=args.command,
        sequence_spec=args.sequence,
        alpha=args.alpha,
        n_grid=parse_grid(args.n_grid),
        weight_spec=args.weight,
        function_spec=args.function,
        reference_degree=args.ref_degree,
        output_path=args.out,
        output_format=args.format,
        rng_seed=args.seed,
    )


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _error_artifact(config: ExperimentConfig, exc: SummabilityError) -> str:
    kind = type(exc).__name__
    if config.output_format == "json":
        import json

        return json.dumps({"error": {"type": kind, "message": str(exc)}},
                          sort_keys=True, indent=2) + "\n"
    return f"{CSV_HEADER}\nerror,0,{config.alpha:.17g},nan,0\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
    except (ConfigError, ValueError) as exc:
        print(f"norsum: configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        result = run(config)
    except ConfigError as exc:
        print(f"norsum: configuration error: {exc}", file=sys.stderr)
        return 2
    except SummabilityError as exc:
        print(f"norsum: {type(exc).__name__}: {exc}", file=sys.stderr)
        _write(config.output_path, _error_artifact(config, exc))
        return 1

    if config.command == "verify":
        failed = 0
        for check in result.checks:
            status = "ok  " if check.passed else "FAIL"
            detail = f"  ({check.detail})" if check.detail else ""
            print(f"{status} {check.name}{detail}")
            failed += 0 if check.passed else 1
        print(f"{len(result.checks) - failed}/{len(result.checks)} checks passed")
        return 1 if failed else 0

    text = to_csv(result, args.timings) if config.output_format == "csv" \
        else to_json(result, args.timings)
    _write(config.output_path, text)
    if result.summary is not None and config.output_format == "csv":
        print(f"fit: slope={result.summary.slope:.6f} "
              f"intercept={result.summary.intercept:.6f}", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
