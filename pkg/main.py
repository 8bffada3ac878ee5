"""
main.py
Entry point for polymedial: parses the command line and hands the
subcommand to the executor.
"""

import argparse
import os
import sys

# Ensure project root is in path
ROOT = os.path.dirname(os.path.abspath(__file__))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors become exit code 1 instead of argparse's 2, which means an expectation mismatch here."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, help="maximum live cosets during enumeration")
    common.add_argument("--timeout", type=float, help="seconds for one automorphism or isomorphism search")
    common.add_argument("--deep", action="store_true", help="run the long verifications")
    common.add_argument("--out", help="directory for reports and graph files")
    common.add_argument("--workers", type=int, help="process pool size for preset-all")
    common.add_argument("--config", help="path to config.yaml")
    common.add_argument("--log", action="store_true", help="print stage logs to stderr")
    common.add_argument("--verbose", action="store_true", help="also print per-step detail")

    parser = _Parser(prog="polymedial", description="Regular and chiral 4-polytopes, their medial layer "
                                                    "graphs and polarity Cayley graphs.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("group", parents=[common], help="enumerate a finitely presented group")
    p.add_argument("file")

    for name, text in (("polytope", "face lattice, orientation and self-duality"),
                       ("medial", "polytope checks plus the medial layer graph"),
                       ("cayley", "medial checks plus the extended group and the polarity Cayley graph")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.add_argument("--kind", choices=("rotation", "reflection"), default="rotation")
        p.add_argument("--schlafli", type=int, nargs="+", required=True)

    p = sub.add_parser("graph", parents=[common], help="classify a graph file")
    p.add_argument("file")
    p.add_argument("--polytope", action="store_true", help="also build the {3,q,3} polytope of a 3-arc-regular graph")

    p = sub.add_parser("family", parents=[common], help="px p r s | six_q_six q | four_q_four t")
    p.add_argument("family")
    p.add_argument("params", type=int, nargs="+")

    p = sub.add_parser("preset", parents=[common], help="run one catalog preset")
    p.add_argument("name")
    p.add_argument("--input", help="presentation file for an external preset")

    p = sub.add_parser("preset-all", parents=[common], help="run every catalog preset")
    p.add_argument("--input", help="presentation file for the external preset")
    return parser


def main(argv=None) -> int:
    from src.commands.executor import EXIT_ERROR, CommandExecutor
    from src.utils.config import Config, RunConfig
    from src.utils.log import configure, set_logging

    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_ERROR

    try:
        config = Config.from_file(args.config)
        run = RunConfig.from_args(args, config)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    configure(config)
    if args.log or args.verbose:
        set_logging(True, args.verbose)

    executor = CommandExecutor(config, run)
    return executor.execute(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
