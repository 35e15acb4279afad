#!/usr/bin/env python3
"""
run_supervision_sweep.py
────────────────────────
Whole-batch supervision sweep with k=2 on the default synthetic stream:
20 nested placements, mean completion F1 per level on the atoms still
unlabelled at the highest level.

Checks the expected shape: F1 at 80% supervision above F1 at 5%,
and at least 0.90 at 80%.

Run from the project root:
    python scripts/run_supervision_sweep.py [seed]
"""

import os
import sys
from datetime import datetime

# ── Project root on the import path ───────────────────────────────────────────
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import SWEEP_CONFIG
from evaluation.sweep import aggregate_sweep, run_sweep
from logging_setup import setup_logging
from utils.report_tables import format_table

TARGET_F1 = 0.90


def run(seed: int = 0):
    print("=" * 60)
    print("  Supervision sweep: whole-batch, knn k=2")
    print(f"  Seed:      {seed}")
    print(f"  Levels:    {', '.join(f'{lv}%' for lv in SWEEP_CONFIG['levels'])}")
    print(f"  Run at:    {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 60)

    setup_logging(level="WARNING", to_file=False)
    started = datetime.now()
    runs = run_sweep(seed=seed, regimes=("whole-batch",), connectors=[("knn", 2)])
    summary = aggregate_sweep(runs)
    print(format_table(summary))

    by_level = summary.set_index("level")["f1_mean"]
    low, high = by_level.loc[min(by_level.index)], by_level.loc[max(by_level.index)]
    elapsed = (datetime.now() - started).total_seconds()

    # ── Verdict ───────────────────────────────────────────────────────────
    ok = high > low and high >= TARGET_F1
    print(f"\n    F1 at {max(by_level.index)}%: {high:.4f}   F1 at {min(by_level.index)}%: {low:.4f}")
    print(f"    {len(runs)} runs in {elapsed:.1f}s")
    print("\n✅  Expected shape holds." if ok else "\n❌  Expected shape does not hold.")
    print("=" * 60)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(run(int(sys.argv[1]) if len(sys.argv) > 1 else 0))
