#!/usr/bin/env python3
"""Cross-validate the closed-form engine against the simulator.

Runs the default three-tier scenario, prints the comparison table, and
writes it to results/validation.csv.

Run:
    python scripts/run_validation.py [n_trials] [seed]
"""
import sys
import time
from pathlib import Path

from leosec.config import table2_config
from leosec.experiments import validate

OUT_DIR = Path(__file__).resolve().parents[1] / "results"


def main() -> int:
    n_trials = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 1
    cfg = table2_config()

    start = time.monotonic()
    rows = validate(cfg, n_trials=n_trials, seed=seed)
    elapsed = time.monotonic() - start

    print(f"{'metric':<8} {'analytic':>10} {'mc_mean':>10} {'mc_stderr':>10} "
          f"{'abs_diff':>10} {'pass':>6}")
    for r in rows:
        print(f"{r.metric:<8} {r.analytic:>10.5f} {r.mc_mean:>10.5f} "
              f"{r.mc_stderr:>10.5f} {r.abs_diff:>10.5f} {str(r.passed):>6}")
    print(f"\n{n_trials} trials, seed {seed}, {elapsed:.1f}s")

    OUT_DIR.mkdir(exist_ok=True)
    out = OUT_DIR / "validation.csv"
    with out.open("w") as fh:
        fh.write("metric,analytic,mc_mean,mc_stderr,abs_diff,pass\n")
        for r in rows:
            fh.write(f"{r.metric},{r.analytic:.12g},{r.mc_mean:.12g},"
                     f"{r.mc_stderr:.12g},{r.abs_diff:.12g},"
                     f"{'true' if r.passed else 'false'}\n")
    print(f"wrote {out}")
    return 0 if all(r.passed for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
