#!/usr/bin/env python3
"""Differential experiment: the bounded engine against the brute-force oracle
on seeded random instances. Reports per-property status distributions and any
disagreement."""

import argparse
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from sleec.engine import Checker  # noqa: E402
from sleec.oracle import OracleInstance  # noqa: E402
from sleec.random_instances import generate_instance  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0, help="first seed")
    args = ap.parse_args()

    t0 = time.perf_counter()
    distribution: Counter = Counter()
    disagreements = []
    checks = 0
    for seed in range(args.seed, args.seed + args.instances):
        inst = generate_instance(seed)
        doc, table = inst.analysis.document, inst.analysis.table
        engine = Checker(doc, table, inst.bounds)
        oracle = OracleInstance(doc, table, inst.bounds)
        duels = []
        for rid in inst.rule_ids:
            duels += [
                ("vacuous", engine.check_vacuous, oracle.check_vacuous, rid),
                ("situational", engine.check_situational, oracle.check_situational, rid),
                ("redundant", engine.check_redundant, oracle.check_redundant, rid),
            ]
        for cid in inst.concern_ids:
            duels.append(("insufficient", engine.check_insufficient, oracle.check_insufficient, cid))
        for pid in inst.purpose_ids:
            duels.append(("restrictive", engine.check_restrictive, oracle.check_restrictive, pid))
        for prop, e_fn, o_fn, target in duels:
            ev, ov = e_fn(target), o_fn(target)
            checks += 1
            distribution[(prop, ev.status.value)] += 1
            if ev.status != ov.status or ev.budget_exhausted:
                disagreements.append((seed, prop, target, ev.status.value, ov.status.value))

    elapsed = time.perf_counter() - t0
    print(f"{checks} checks over {args.instances} instances in {elapsed:.1f}s\n")
    print(f"{'property':<14}{'status':<24}{'count'}")
    for (prop, status), count in sorted(distribution.items()):
        print(f"{prop:<14}{status:<24}{count}")
    if disagreements:
        print("\nDISAGREEMENTS:")
        for row in disagreements:
            print(f"  {row}")
        return 1
    print(f"\nagreement: {checks}/{checks} (100%)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
