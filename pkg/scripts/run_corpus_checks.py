#!/usr/bin/env python3
"""Run all five well-formedness checks over the assistive-robot corpus and
print the verdicts with filtered diagnoses."""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sleec.api import execute_check  # noqa: E402

DEFAULT_CORPUS = Path(__file__).resolve().parents[1] / "corpus" / "assistive.sleec"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("file", nargs="?", default=str(DEFAULT_CORPUS))
    ap.add_argument("--mode", choices=["raw", "filtered"], default="filtered")
    args = ap.parse_args()

    source = Path(args.file).read_text()
    t0 = time.perf_counter()
    outcome = execute_check(source, mode=args.mode)
    elapsed = time.perf_counter() - t0

    if outcome.has_errors:
        for d in outcome.analysis.diagnostics:
            print(f"{d.span.line}:{d.span.col}: {d.severity.value}: {d.message}")
        return 2

    issues = 0
    for v in outcome.verdicts:
        flag = "!" if v["status"] == "IssueFound" else " "
        issues += v["status"] == "IssueFound"
        extra = ""
        if v.get("conflict_set"):
            extra = f"  conflict_set={{{', '.join(v['conflict_set'])}}}"
        print(f"{flag} {v['property']:<12} {v['target']:<4} {v['status']}{extra}")
        if "diagnosis" in v:
            for line in v["diagnosis"]["text"].splitlines():
                print(f"      {line}")
    print(f"\n{len(outcome.verdicts)} checks, {issues} issues, {elapsed:.2f}s")
    return 1 if issues else 0


if __name__ == "__main__":
    sys.exit(main())
