# cli/main.py
"""
Command-line entry point.

Usage:
    python main.py bounds problem.json
    python main.py weave problem.json --json
    python main.py weave --demo example1 --n 5
    python main.py riesz - < problem.json
    python main.py lift problem.json --per-pattern
    python main.py demo example2
"""

import argparse
import logging
import sys
from typing import List, Optional

from cli.problem import build_problem, parse_problem, resolve_settings
from cli.report import render_text, to_json
from config import Settings, configure_logging
from core.errors import FrameToolkitError
from supervisor.supervisor import COMMANDS, EXIT_NUMERICAL, EXIT_USAGE, Supervisor


def _threads(value: str) -> int:
    if value == "max":
        return 0
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be a positive integer or 'max'")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weaving", description="Fusion frame bounds and weaving analysis")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("target", nargs="?", default=None,
                    help="problem file, '-' for stdin; demo name for the demo command")
    ap.add_argument("--demo", default=None, help="run the command on a built-in problem")
    ap.add_argument("--n", type=int, default=None, help="ambient dimension for example1 / orthonormal demos")
    ap.add_argument("--tol", type=float, default=None, help="frame tolerance (relative)")
    ap.add_argument("--pattern-cap", type=int, default=None, help="largest index set enumerated exhaustively")
    ap.add_argument("--sample", type=int, default=None, help="sample N random patterns beyond the cap")
    ap.add_argument("--seed", type=int, default=None, help="seed for pattern sampling")
    ap.add_argument("--threads", type=_threads, default=None, help="worker threads, or 'max'")
    ap.add_argument("--json", action="store_true", help="machine-readable report")
    ap.add_argument("--per-pattern", action="store_true", default=None, help="always emit per-pattern tables")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    env = Settings.from_env()
    configure_logging(env)
    flags = dict(
        frame_tol=args.tol,
        pattern_cap=args.pattern_cap,
        sample_count=args.sample,
        sample_seed=args.seed,
        threads=args.threads,
    )

    problem = None
    demo = args.target if args.command == "demo" else args.demo
    try:
        problem_file = None
        if args.command != "demo" and demo is None:
            problem_file = parse_problem(args.target)
        settings = resolve_settings(env, problem_file, **flags)
        if problem_file is not None:
            problem = build_problem(problem_file, settings, source=args.target or "<stdin>")
    except FrameToolkitError as e:
        logging.error(f"{e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        logging.error(f"{e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    response = Supervisor(settings, per_pattern=args.per_pattern).run(args.command, problem, demo=demo, n=args.n)
    if response.get("error"):
        print(f"error: {response['error']}", file=sys.stderr)
    sys.stdout.write(to_json(response) if args.json else render_text(response))
    return int(response.get("exit_code", EXIT_NUMERICAL))


if __name__ == "__main__":
    raise SystemExit(main())
