#!/usr/bin/env python3
"""Regenerate the plot-ready trend tables with the analytic engine.

Writes long-format CSVs into results/:

    gamma_vs_density.csv   secure probability over the power share, for
                           sparse / medium / dense device deployments
    altitude_sweep.csv     secure and successful probability over the
                           serving tier's altitude (other tiers fixed)
    availability_grid.csv  availability over beamwidth x altitude

Run:
    python scripts/reproduce_trends.py
"""
import math
from pathlib import Path

from leosec.config import table2_config, with_parameter
from leosec.experiments import SweepSpec, sweep

OUT_DIR = Path(__file__).resolve().parents[1] / "results"

GAMMAS = tuple(round(0.05 * i, 2) for i in range(1, 20))
DENSITIES = (1e-6, 1e-5, 1e-4)
ALTITUDES = tuple(float(a) for a in range(500, 1501, 50))
BEAMS = (math.pi / 12, math.pi / 6, math.pi / 4, math.pi / 3, math.pi / 2)


def write_rows(name: str, header: str, lines: list[str]) -> None:
    OUT_DIR.mkdir(exist_ok=True)
    path = OUT_DIR / name
    path.write_text(header + "\n" + "\n".join(lines) + "\n")
    print(f"wrote {path} ({len(lines)} rows)")


def main() -> None:
    cfg = table2_config()

    lines = []
    spec = SweepSpec(axis1=("device_density", DENSITIES), axis2=("gamma", GAMMAS))
    for row in sweep(cfg, spec):
        lines.append(f"{row.axis1:.12g},{row.axis2:.12g},{row.value:.12g}")
    write_rows("gamma_vs_density.csv", "device_density,gamma,p_sec", lines)

    lines = []
    for metric in ("p_suc", "p_sec"):
        for row in sweep(cfg, SweepSpec(axis1=("altitude_m", ALTITUDES), metric=metric)):
            lines.append(f"{metric},{row.axis1:.12g},{row.value:.12g}")
    write_rows("altitude_sweep.csv", "metric,altitude_km,value", lines)

    lines = []
    for beam in BEAMS:
        beamed = with_parameter(cfg, "theta_beam", beam)
        for row in sweep(beamed, SweepSpec(axis1=("altitude_m", ALTITUDES), metric="p_av")):
            lines.append(f"{beam:.12g},{row.axis1:.12g},{row.value:.12g}")
    write_rows("availability_grid.csv", "theta_beam_rad,altitude_km,p_av", lines)


if __name__ == "__main__":
    main()
