#!/usr/bin/env python3
"""
Multi-seed acceptance sweep
Runs the shipped suites over many seeds and checks the outcomes against
the exact oracle. Exits non-zero if any check fails.
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from datetime import datetime

from ismcheck.config import get_settings
from ismcheck.log import setup_logging
from ismcheck.runner import Verdict
from ismcheck.suites import get_suite, oracle_reports, run_property, sample_against_oracle

SEEDS = 50
SAMPLES = 10_000
MAX_SIGMAS = 4


def sweep(suite_name, prop_name, seeds, tests=100):
    """Run one property over `seeds` consecutive seeds; returns verdict counts"""
    suite = get_suite(suite_name)
    spec = suite.property(prop_name)
    base = get_settings().seed
    counts = {v: 0 for v in Verdict}
    for offset in range(seeds):
        run = run_property(suite, spec, seed=base + offset, tests=tests)
        counts[run.result.verdict] += 1
    return counts


def check(name, passed, detail):
    status = "✅" if passed else "❌"
    print(f"  {status} {name}: {detail}")
    return passed


def main():
    setup_logging(get_settings().log_level)
    start_time = datetime.now()

    print("\n" + "=" * 70)
    print("🚀 ACCEPTANCE SWEEP")
    print("=" * 70)
    print(f"\nStart time: {start_time.strftime('%Y-%m-%d %H:%M:%S')}")
    print(f"Seeds per property: {SEEDS} (starting at {get_settings().seed})")
    print("=" * 70 + "\n")

    results = []

    buggy = sweep("atm-buggy", "eventually-ready", SEEDS)
    expected = oracle_reports("atm-buggy", "eventually-ready")[0]
    results.append(check(
        "atm-buggy eventually-ready falsified",
        buggy[Verdict.FALSIFIED] >= SEEDS - 1,
        f"{buggy[Verdict.FALSIFIED]}/{SEEDS} (oracle chance per run {expected.falsification_chance:.4f})",
    ))

    for suite_name in ("atm-buggy", "atm-fixed"):
        counts = sweep(suite_name, "ready-insert", SEEDS)
        results.append(check(
            f"{suite_name} ready-insert passes",
            counts[Verdict.PASSED] == SEEDS,
            f"{counts[Verdict.PASSED]}/{SEEDS}",
        ))

    fixed = sweep("atm-fixed", "eventually-ready", SEEDS)
    fixed_oracle = oracle_reports("atm-fixed", "eventually-ready")[0]
    print(f"  ℹ️  atm-fixed eventually-ready falsified {fixed[Verdict.FALSIFIED]}/{SEEDS}, "
          f"oracle expects ~{fixed_oracle.falsification_chance * SEEDS:.1f}")

    for suite_name, prop_name, variant in (
        ("atm-fixed", "eventually-ready", "exact"),
        ("arq", "send-three-ok", "range"),
    ):
        agreement = sample_against_oracle(suite_name, prop_name, variant, samples=SAMPLES)
        results.append(check(
            f"{suite_name} {prop_name} visit rate [{variant}]",
            agreement.sigmas <= MAX_SIGMAS,
            f"sampled {float(agreement.observed):.4f} vs exact {float(agreement.expected):.4f} "
            f"({agreement.sigmas:.2f} sigma over {SAMPLES} traces)",
        ))

    elapsed = (datetime.now() - start_time).total_seconds()
    passed = sum(results)

    print("\n" + "=" * 70)
    print("📊 SWEEP SUMMARY")
    print("=" * 70)
    print(f"\nChecks passed: {passed}/{len(results)}")
    print(f"Total time: {elapsed:.1f} seconds")
    print("=" * 70 + "\n")

    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
