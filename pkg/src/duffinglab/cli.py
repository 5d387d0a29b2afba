"""Command-line front end.

    duffinglab <subcommand> --config experiment.yaml --out results/

Subcommands: steady, sweep, ringdown, pumpprobe, intermodal. The
subcommand must match the ``experiment`` kind declared in the config.
Exit codes: 0 success, 2 config parse/validation failure, 3 model
divergence during integration.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .errors import DivergenceError, InvalidInputError
from .runners import run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3

# subcommand -> config experiment kind
_SUBCOMMANDS = {
    "steady": "steadystate",
    "sweep": "sweep",
    "ringdown": "ringdown",
    "pumpprobe": "pumpprobe",
    "intermodal": "intermodal",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duffinglab",
        description="Nonlinear resonator virtual experiments: steady-state "
                    "branches, hysteresis sweeps, ring-down, pump-probe mixing, "
                    "intermodal tuning.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in _SUBCOMMANDS.items():
        p = sub.add_parser(name, help=f"run a '{kind}' experiment config")
        p.add_argument("--config", required=True, help="path to the YAML experiment config")
        p.add_argument("--out", required=True, help="output directory for CSV and metadata")
        p.add_argument("--downsample", type=int, default=1, metavar="N",
                       help="keep every N-th row of time-series output (default 1)")
        p.add_argument("--seed-branch", choices=["upper", "lower"], default=None,
                       help="override the steady-state branch used to seed the run")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        expected = _SUBCOMMANDS[args.command]
        if config.kind != expected:
            raise ConfigError(
                f"subcommand '{args.command}' expects an '{expected}' config, "
                f"but {args.config} declares '{config.kind}'")
        paths = run(config, args.out, downsample=args.downsample,
                    seed_branch=args.seed_branch)
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
