"""Command line front end: ``horco FILE [options]``.

Exit codes: 0 every rule oriented, 1 some rule not oriented (or a theory or
signature problem), 2 only budget exhaustion stood in the way, 3 bad input.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .accessibility import AccMode
from .closure import CallOrder, ClosureConfig, RewriteSystem
from .report import ENGINES, dumps, run_engine
from .syntax import TrsInputError, parse_system
from .terms import TermError

EXIT_INPUT_ERROR = 3


def bundled_examples() -> dict[str, str]:
    """Bundled ``.trs`` files by stem name."""
    root = resources.files("horco") / "examples"
    return {p.name[:-4]: p.read_text(encoding="utf-8") for p in root.iterdir() if p.name.endswith(".trs")}


def read_source(arg: str) -> str:
    """Contents of a file path, or of a bundled example given by name."""
    path = Path(arg)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    examples = bundled_examples()
    name = path.name[:-4] if path.name.endswith(".trs") else path.name
    if name in examples:
        return examples[name]
    raise FileNotFoundError(f"no such file or bundled example: {arg}")


def load_system(arg: str, config: ClosureConfig | None = None) -> RewriteSystem:
    return parse_system(read_source(arg), config)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors share the input-error exit code
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="horco", description="Check termination of higher-order rewrite rules.")
    p.add_argument("file", nargs="?", help="a .trs file, or the name of a bundled example")
    p.add_argument("--engine", choices=ENGINES, default="horco")
    p.add_argument("--acc", choices=[m.value for m in AccMode], default=AccMode.POSITIVE.value,
                   help="accessible arguments: base types only, or positive occurrences")
    p.add_argument("--call-order", choices=[c.value for c in CallOrder], default=CallOrder.ACCESSIBILITY.value,
                   help="relation comparing the arguments of recursive calls")
    p.add_argument("--patterns", action="store_true", help="enable decompositions of higher-order patterns")
    p.add_argument("--red", action="store_true", help="enable the reduction rule inside the closure")
    p.add_argument("--depth", type=int, default=12, help="search depth budget")
    p.add_argument("--trans", type=int, default=3, help="length bound for chains of ordering steps")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--validate-certs", action="store_true", help="replay every certificate produced")
    p.add_argument("--selftest", action="store_true", help="run the enumeration-based property checks")
    p.add_argument("--quick", action="store_true", help="smaller sizes for --selftest")
    p.add_argument("--list-examples", action="store_true", help="list bundled examples and exit")
    return p


def _selftest(quick: bool) -> int:
    from .selftest import run_selftest

    results = run_selftest(quick=quick)
    for r in results:
        print(r.summary())
    return 0 if all(r.ok for r in results) else 1


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list_examples:
        for name in sorted(bundled_examples()):
            print(name)
        return 0
    if args.selftest:
        return _selftest(args.quick)
    if args.file is None:
        print("horco: error: a file or example name is required", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        config = ClosureConfig(
            acc_mode=AccMode(args.acc),
            call_order=CallOrder(args.call_order),
            miller_rules=args.patterns,
            red_rule=args.red,
            depth_budget=args.depth,
            trans_budget=args.trans,
        )
        system = load_system(args.file, config)
    except (OSError, ValueError, TrsInputError, TermError) as e:
        print(f"horco: error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    report = run_engine(system, args.engine, validate=args.validate_certs)
    if args.format == "json":
        print(dumps(report))
    else:
        print(report.to_text())
    return report.exit_code
