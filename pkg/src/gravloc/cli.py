"""Command line interface: one subcommand per scenario kind.

    gravloc <kind> --config path.yaml [--seed N] [--out DIR]

Exit codes: 0 success, 2 config error, 3 regime violation, 4 numerical
accuracy failure, 5 output failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import SCENARIO_KINDS, load_config
from .errors import ConfigError, GravlocError
from .runner import execute


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravloc",
        description="Self-gravity measurement laboratory: classicality "
        "criteria, two-branch wavepacket runs, detector escape statistics "
        "and SI estimates.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in SCENARIO_KINDS:
        p = sub.add_parser(kind, help=f"run a '{kind}' scenario")
        p.add_argument("--config", required=True, help="YAML scenario file")
        p.add_argument("--seed", type=int, default=None, help="override the seed")
        p.add_argument(
            "--out", default=None, help="output directory (default runs/<kind>)"
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if config.kind != args.kind:
            raise ConfigError(
                f"config declares scenario '{config.kind}' but the "
                f"'{args.kind}' subcommand was invoked"
            )
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError(f"seed must fit in 64 bits, got {args.seed}")
            config = replace(config, seed=args.seed)
        out_dir = args.out if args.out is not None else f"runs/{config.kind}"
        summary = execute(config, out_dir)
    except GravlocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    for key in sorted(summary):
        print(f"{key}: {summary[key]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
