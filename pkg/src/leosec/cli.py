"""Command-line front end.

Commands: ``analyze`` (closed-form metrics as JSON), ``simulate`` (Monte
Carlo estimates), ``validate`` (engine comparison table), ``sweep``
(parameter grids as long-format tables), ``optimize`` (power-share search).

Result data goes to --out or stdout; diagnostics go to stderr only.  Exit
codes: 0 success, 1 input error, 2 numerical non-convergence, 3 when a
validate row fails.  Numbers are serialized with 12 significant digits so
repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

from . import experiments, montecarlo
from .analytics import DEFAULT_QUAD, QuadratureSpec, full_report
from .config import ConfigError, NetworkConfig, PRESETS, config_from_dict, config_to_dict

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2
EXIT_VALIDATION = 3

COMMANDS = ("analyze", "simulate", "validate", "sweep", "optimize")


class CliInputError(ValueError):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: str | None = None
    preset: str | None = None
    seed: int = 1
    n_trials: int = 10_000
    quad_nodes: int | None = None
    out: str | None = None
    fmt: str | None = None           # None -> per-command default
    axis1: str | None = None         # sweep: "name=v1,v2,..."
    axis2: str | None = None
    metric: str = "p_sec"
    engine: str = "analytic"
    grid_points: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise CliInputError(f"unknown command {self.command!r}")
        if self.seed < 1:
            raise CliInputError(f"seed must be positive, got {self.seed}")
        if self.n_trials < 1:
            raise CliInputError(f"trials must be positive, got {self.n_trials}")


def parse_config(text: str) -> NetworkConfig:
    """Parse a JSON config document into a validated NetworkConfig."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("<document>", f"invalid JSON: {e}") from e
    return config_from_dict(doc)


def _load_config(manifest: RunManifest) -> NetworkConfig:
    if manifest.config_path is not None:
        try:
            with open(manifest.config_path, "r", encoding="utf-8") as fh:
                return parse_config(fh.read())
        except OSError as e:
            raise CliInputError(f"cannot read config {manifest.config_path}: {e}") from e
    name = manifest.preset or "table2"
    if name not in PRESETS:
        raise CliInputError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return PRESETS[name]()


def _quad(manifest: RunManifest) -> QuadratureSpec:
    if manifest.quad_nodes is None:
        return DEFAULT_QUAD
    return replace(DEFAULT_QUAD, nodes_per_panel=manifest.quad_nodes)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str)):
        return str(x)
    return f"{x:.12g}"


def _round12(obj):
    """Recursively round floats to 12 significant digits for stable JSON."""
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _as_json(obj) -> str:
    return json.dumps(_round12(obj), indent=2) + "\n"


def _as_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _parse_axis(text: str) -> tuple[str, tuple[float, ...]]:
    name, sep, values = text.partition("=")
    if not sep or not name or not values:
        raise CliInputError(f"axis must look like name=v1,v2,..., got {text!r}")
    try:
        parsed = tuple(float(v) for v in values.split(","))
    except ValueError as e:
        raise CliInputError(f"bad axis values in {text!r}: {e}") from e
    return name, parsed


def _mc_entry(est: montecarlo.McEstimate) -> dict:
    return {"mean": est.mean, "stderr": est.stderr,
            "n_trials": est.n_trials, "seed": est.master_seed}


def _run_analyze(cfg: NetworkConfig, manifest: RunManifest) -> int:
    report = full_report(cfg, _quad(manifest))
    doc = {
        "p_av": report.p_av_per_tier[cfg.legit_tier],
        "p_av_per_tier": list(report.p_av_per_tier),
        "p_cov": report.p_cov,
        "p_suc": report.p_suc,
        "p_out": report.p_out,
        "p_sec": report.p_sec,
    }
    if (manifest.fmt or "json") == "json":
        _emit(_as_json(doc), manifest.out)
    else:
        rows = [[f"p_av_{k}", v] for k, v in enumerate(report.p_av_per_tier)]
        rows += [[name, doc[name]] for name in ("p_cov", "p_suc", "p_out", "p_sec")]
        _emit(_as_csv(["metric", "value"], rows), manifest.out)
    return EXIT_OK


def _run_simulate(cfg: NetworkConfig, manifest: RunManifest) -> int:
    est = montecarlo.estimate(cfg, manifest.n_trials, manifest.seed)
    doc = {
        "p_av": _mc_entry(est[f"p_av_{cfg.legit_tier}"]),
        "p_av_per_tier": [_mc_entry(est[f"p_av_{k}"]) for k in range(len(cfg.tiers))],
        "p_cov": _mc_entry(est["p_cov"]),
        "p_suc": _mc_entry(est["p_suc"]),
        "p_out": _mc_entry(est["p_out"]),
        "p_sec": _mc_entry(est["p_sec"]),
    }
    if (manifest.fmt or "json") == "json":
        _emit(_as_json(doc), manifest.out)
    else:
        names = [f"p_av_{k}" for k in range(len(cfg.tiers))] + ["p_cov", "p_suc", "p_out", "p_sec"]
        rows = [[n, est[n].mean, est[n].stderr, est[n].n_trials, est[n].master_seed]
                for n in names]
        _emit(_as_csv(["metric", "mean", "stderr", "n_trials", "seed"], rows), manifest.out)
    return EXIT_OK


def _run_validate(cfg: NetworkConfig, manifest: RunManifest) -> int:
    rows = experiments.validate(cfg, manifest.n_trials, manifest.seed, _quad(manifest))
    if (manifest.fmt or "csv") == "csv":
        table = [[r.metric, r.analytic, r.mc_mean, r.mc_stderr, r.abs_diff, r.passed]
                 for r in rows]
        _emit(_as_csv(["metric", "analytic", "mc_mean", "mc_stderr", "abs_diff", "pass"],
                      table), manifest.out)
    else:
        doc = [{"metric": r.metric, "analytic": r.analytic, "mc_mean": r.mc_mean,
                "mc_stderr": r.mc_stderr, "abs_diff": r.abs_diff, "pass": r.passed}
               for r in rows]
        _emit(_as_json(doc), manifest.out)
    return EXIT_OK if all(r.passed for r in rows) else EXIT_VALIDATION


def _run_sweep(cfg: NetworkConfig, manifest: RunManifest) -> int:
    if manifest.axis1 is None:
        raise CliInputError("sweep requires --axis1 name=v1,v2,...")
    spec = experiments.SweepSpec(
        axis1=_parse_axis(manifest.axis1),
        axis2=_parse_axis(manifest.axis2) if manifest.axis2 else None,
        metric=manifest.metric,
        engine=manifest.engine,
    )
    rows = experiments.sweep(cfg, spec, n_trials=manifest.n_trials, seed=manifest.seed,
                             quad=_quad(manifest))
    if (manifest.fmt or "csv") == "csv":
        table = [[r.axis1, r.axis2, r.metric, r.engine, r.value, r.stderr] for r in rows]
        _emit(_as_csv(["axis1", "axis2", "metric", "engine", "value", "stderr"], table),
              manifest.out)
    else:
        doc = [{"axis1": r.axis1, "axis2": r.axis2, "metric": r.metric, "engine": r.engine,
                "value": r.value, "stderr": r.stderr} for r in rows]
        _emit(_as_json(doc), manifest.out)
    return EXIT_OK


def _run_optimize(cfg: NetworkConfig, manifest: RunManifest) -> int:
    g_star, p_star, grid, values = experiments.optimize_gamma_detailed(
        cfg, manifest.grid_points, _quad(manifest))
    if (manifest.fmt or "json") == "json":
        doc = {"gamma_star": g_star, "p_sec_star": p_star,
               "grid": [{"gamma": g, "p_sec": v} for g, v in zip(grid, values)]}
        _emit(_as_json(doc), manifest.out)
    else:
        rows = [[g, v, False] for g, v in zip(grid, values)]
        rows.append([g_star, p_star, True])
        _emit(_as_csv(["gamma", "p_sec", "is_optimum"], rows), manifest.out)
    return EXIT_OK


_RUNNERS = {
    "analyze": _run_analyze,
    "simulate": _run_simulate,
    "validate": _run_validate,
    "sweep": _run_sweep,
    "optimize": _run_optimize,
}


def run(manifest: RunManifest) -> int:
    """Execute one manifest; returns the process exit code."""
    cfg = _load_config(manifest)
    return _RUNNERS[manifest.command](cfg, manifest)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliInputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="leosec", description="Uplink security metrics for "
                     "IoT-to-LEO links in multi-tier constellations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", metavar="PATH", help="JSON scenario file")
        src.add_argument("--preset", metavar="NAME", help="built-in scenario (table2)")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--trials", type=int, default=10_000)
        p.add_argument("--quad-nodes", type=int, default=None)
        p.add_argument("--out", metavar="PATH", help="write results here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        if command == "sweep":
            p.add_argument("--axis1", metavar="NAME=V1,V2,...")
            p.add_argument("--axis2", metavar="NAME=V1,V2,...")
            p.add_argument("--metric", default="p_sec",
                           choices=experiments.METRIC_NAMES)
            p.add_argument("--engine", default="analytic", choices=experiments.ENGINES)
        if command == "optimize":
            p.add_argument("--grid-points", type=int, default=None)
    return parser


def build_manifest(argv: list[str]) -> RunManifest:
    ns = _build_parser().parse_args(argv)
    return RunManifest(
        command=ns.command,
        config_path=ns.config,
        preset=ns.preset,
        seed=ns.seed,
        n_trials=ns.trials,
        quad_nodes=ns.quad_nodes,
        out=ns.out,
        fmt=ns.format,
        axis1=getattr(ns, "axis1", None),
        axis2=getattr(ns, "axis2", None),
        metric=getattr(ns, "metric", "p_sec"),
        engine=getattr(ns, "engine", "analytic"),
        grid_points=getattr(ns, "grid_points", None),
    )


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        manifest = build_manifest(argv)
        return run(manifest)
    except ArithmeticError as e:  # quadrature non-convergence and kin
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:  # config schema/invariant violations, bad inputs
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
