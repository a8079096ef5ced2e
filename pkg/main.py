#!/usr/bin/env python3
"""
MeadowCalc command line.

    python main.py script.mc          run a script, exit 0 iff no FAIL line
    python main.py                    interactive prompt
"""

import argparse
import logging
import sys

from meadowcalc.session import Session, with_overrides
from meadowcalc.settings import load_settings

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact meadow-based probability calculus")
    parser.add_argument("script", nargs="?", help="script file to run; omit for the interactive prompt")
    parser.add_argument("--max-atoms", type=int, default=None, help="bound on exhaustive search sizes")
    parser.add_argument("--seed", type=int, default=None, help="seed for sampled law checks")
    parser.add_argument("--no-cache", action="store_true", help="do not read or write the search cache")
    return parser


def run_batch(session: Session, path: str) -> int:
    with open(path, encoding="utf-8") as handle:
        for line in session.run_script(handle):
            print(line)
    return 0 if session.failures == 0 else 1


def run_repl(session: Session) -> int:
    print("MeadowCalc. Type commands, Ctrl-D to quit.")
    while True:
        try:
            text = input("> ")
        except EOFError:
            print()
            break
        for line in session.run_line(text):
            print(line)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    settings = with_overrides(load_settings(), max_atoms=args.max_atoms, seed=args.seed)
    if args.no_cache:
        settings = with_overrides(settings, cache_enabled=False)
    logging.basicConfig(level=getattr(logging, settings.log_level.upper(), logging.WARNING), stream=sys.stderr)

    session = Session(settings)
    if args.script:
        logger.info(f"Running script {args.script}")
        return run_batch(session, args.script)
    return run_repl(session)


if __name__ == "__main__":
    sys.exit(main())
