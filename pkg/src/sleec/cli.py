"""Command-line interface: parse, fmt, check and serve.

Exit codes: 0 no issues, 1 well-formedness issues found, 2 parse/semantic or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .api import PROPERTIES, TargetError, UnsupportedDocument, execute_check
from .ast import Severity
from .engine import Status
from .printer import pretty_print
from .sema import analyze

EXIT_OK = 0
EXIT_ISSUES = 1
EXIT_ERROR = 2


def _read_source(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"file not found: {path}")
    return p.read_text(encoding="utf-8")


def _print_diagnostics(analysis, stream) -> None:
    for d in analysis.diagnostics:
        print(
            f"{d.span.line}:{d.span.col}: {d.severity.value}: {d.message} [{d.code}]",
            file=stream,
        )


def _cmd_parse(args: argparse.Namespace) -> int:
    source = _read_source(args.file)
    analysis = analyze(source)
    if args.json:
        print(
            json.dumps(
                {
                    "diagnostics": [d.to_json() for d in analysis.diagnostics],
                    "symbols": analysis.table.to_json(),
                },
                indent=2,
            )
        )
    else:
        _print_diagnostics(analysis, sys.stderr if not analysis.ok else sys.stdout)
        doc = analysis.document
        print(
            f"{len(doc.definitions)} definitions, {len(doc.rules)} rules, "
            f"{len(doc.concerns)} concerns, {len(doc.purposes)} purposes"
        )
    return EXIT_OK if analysis.ok else EXIT_ERROR


def _cmd_fmt(args: argparse.Namespace) -> int:
    source = _read_source(args.file)
    analysis = analyze(source)
    has_parse_errors = any(
        d.severity is Severity.ERROR and d.code.startswith("SLEEC-P")
        for d in analysis.diagnostics
    )
    if has_parse_errors:
        _print_diagnostics(analysis, sys.stderr)
        return EXIT_ERROR
    text = pretty_print(analysis.document)
    if args.write:
        Path(args.file).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    source = _read_source(args.file)
    target = args.target or args.rule or "all"
    outcome = execute_check(
        source,
        prop=args.property,
        target=target,
        mode=args.mode,
        max_points=args.max_points,
        horizon=args.horizon,
        budget=args.budget,
    )
    if args.json:
        print(json.dumps(outcome.to_json(), indent=2))
    else:
        _print_diagnostics(outcome.analysis, sys.stderr if outcome.has_errors else sys.stdout)
        for v in outcome.verdicts:
            line = f"{v['property']}({v['target']}): {v['status']}"
            if v.get("budget_exhausted"):
                line += " (search budget exhausted)"
            if v.get("conflict_set"):
                line += f" conflict_set={{{', '.join(v['conflict_set'])}}}"
            print(line)
            if "diagnosis" in v:
                print("  " + v["diagnosis"]["text"].replace("\n", "\n  "))
    if outcome.has_errors:
        return EXIT_ERROR
    return EXIT_ISSUES if outcome.has_issues else EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve

    serve(port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sleec",
        description="Write, debug and check SLEEC normative requirements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a .sleec file and report diagnostics")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("fmt", help="pretty-print a .sleec file")
    p.add_argument("file")
    p.add_argument("-w", "--write", action="store_true", help="rewrite the file in place")
    p.set_defaults(fn=_cmd_fmt)

    p = sub.add_parser("check", help="run well-formedness checks")
    p.add_argument("file")
    p.add_argument("--property", choices=PROPERTIES, default="all")
    p.add_argument("--target", help="rule/concern/purpose id, or 'all'")
    p.add_argument("--rule", help="alias for --target")
    p.add_argument("--mode", choices=["raw", "filtered"], default="filtered")
    p.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    p.add_argument("--max-points", type=int, help="bound on trace points")
    p.add_argument("--horizon", type=int, help="bound on trace time (seconds)")
    p.add_argument("--budget", type=int, help="search node budget")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("SLEEC_PORT", "8077")),
    )
    p.set_defaults(fn=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.fn(args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (TargetError, UnsupportedDocument) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
