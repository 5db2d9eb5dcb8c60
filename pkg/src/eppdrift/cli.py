"""Command line front end.

    eppdrift run --config FILE [--mode MODE] [--out DIR] [--threads N]
    eppdrift validate --config FILE

Exit status: 0 success, 1 configuration error, 2 runtime error.
Progress and timings go to stderr; data only to files.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import kernels
from .config import MODES, load_config
from .errors import ConfigInvalid, EppError

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("eppdrift")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eppdrift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a parameter sweep")
    run.add_argument("--config", required=True)
    run.add_argument("--mode", choices=MODES)
    run.add_argument("--out")
    run.add_argument("--threads", type=int)
    run.add_argument("-q", "--quiet", action="store_true")
    val = sub.add_parser("validate", help="check a configuration file")
    val.add_argument("--config", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(asctime)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = load_config(args.config)
        if args.command == "run":
            if args.mode:
                cfg.mode = args.mode
            if args.out:
                cfg.out = args.out
            if args.threads is not None:
                cfg.threads = args.threads
        cfg.validate()
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "validate":
        n = len(cfg.sweep())
        print(f"ok: {n} parameter set(s), mode={cfg.mode}", file=sys.stderr)
        return EXIT_OK

    from .experiment import run_experiment

    log.info("kernels: %s", kernels.backend_name())
    try:
        run_experiment(cfg)
    except EppError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
