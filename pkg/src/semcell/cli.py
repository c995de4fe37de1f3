"""Scenario runner and validation command line.

``semcell run`` sweeps one axis of a JSON-configured scenario and writes
a CSV of every closed-form metric (optionally with Monte Carlo
estimates) plus a manifest that replays the run byte-identically.
``semcell validate`` pits the closed forms against the simulation oracle
at the configured operating point.  ``semcell design`` exposes the two
radius solvers.

Exit codes: 0 success, 2 config error, 3 solver failure, 4 validation
mismatch.
"""

from __future__ import annotations

import argparse
import json
import math
import platform
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .design import DesignTarget, optimal_sem_util_radius, radius_for_outage_threshold
from .linkmodel import (NetworkParams, db_to_linear, dbm_per_hz_to_watts_per_hz,
                        linear_to_db, mean_edge_snr, snr_scale)
from .montecarlo import (BitOutage, ExactCount, HybridOutage, RangeCount, Scenario,
                         SemOutage, SemUtilization, estimate_many)
from .outage import (NetOutageMode, binom_range_prob, network_outage, outage_report)
from .presets import PRESETS, expand_preset
from .ratemodel import (RateConfig, SimilarityFit, SolverError, gamma_gap, thresholds)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VALIDATION = 4

_METRICS = ("pi_h", "pi_b", "pi_s", "net_all", "net_any", "s_range", "pi_g", "util_range")
_SWEEP_AXES = ("edge_snr_db", "radius_m", "m_th", "r_out")


class ConfigError(ValueError):
    """A config document failed validation; the message carries the field path."""


@dataclass(frozen=True)
class ScenarioConfig:
    """One fully resolved sweep: scenario, axis, grid, count ranges, MC plan."""

    scenario: Scenario
    sweep_axis: str
    grid: tuple[float, ...]
    outage_lo: int
    outage_hi: int
    util_lo: int
    util_hi: int
    mc_samples: int
    mc_seed: int
    label: str


# ---------------------------------------------------------------------------
# config ingestion
# ---------------------------------------------------------------------------

def _section(doc: dict, key: str) -> dict:
    value = doc.get(key)
    if not isinstance(value, dict):
        raise ConfigError(f"{key}: required object is missing or not a JSON object")
    return value


def _get_number(section: dict, path: str, key: str, *, required: bool = True,
                default: float | None = None) -> float | None:
    if key not in section:
        if required:
            raise ConfigError(f"{path}.{key}: required number is missing")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{path}.{key}: expected a finite number, got {value!r}")
    return float(value)


def _get_int(section: dict, path: str, key: str, *, required: bool = True,
             default: int | None = None) -> int | None:
    if key not in section:
        if required:
            raise ConfigError(f"{path}.{key}: required integer is missing")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


def _get_bool(section: dict, path: str, key: str, default: bool) -> bool:
    value = section.get(key, default)
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected true/false, got {value!r}")
    return value


def _parse_network(doc: dict) -> NetworkParams:
    sec = _section(doc, "network")
    if "noise_density_dbm_per_hz" in sec and "noise_density_w_per_hz" in sec:
        raise ConfigError("network: give noise density either in dBm/Hz or W/Hz, not both")
    if "noise_density_dbm_per_hz" in sec:
        noise = dbm_per_hz_to_watts_per_hz(
            _get_number(sec, "network", "noise_density_dbm_per_hz"))
    else:
        noise = _get_number(sec, "network", "noise_density_w_per_hz")
    try:
        return NetworkParams(
            num_users=_get_int(sec, "network", "num_users"),
            tx_power_w=_get_number(sec, "network", "tx_power_w"),
            total_bandwidth_hz=_get_number(sec, "network", "total_bandwidth_hz"),
            carrier_freq_hz=_get_number(sec, "network", "carrier_freq_hz"),
            noise_density_w_per_hz=noise,
            pathloss_exp=_get_number(sec, "network", "pathloss_exp"),
            cell_radius_m=_get_number(sec, "network", "cell_radius_m"))
    except ValueError as exc:
        raise ConfigError(f"network: {exc}") from exc


def _parse_fit(doc: dict) -> SimilarityFit:
    sec = _section(doc, "similarity_fit")
    try:
        return SimilarityFit(
            a1=_get_number(sec, "similarity_fit", "a1"),
            a2=_get_number(sec, "similarity_fit", "a2"),
            c1=_get_number(sec, "similarity_fit", "c1"),
            c2=_get_number(sec, "similarity_fit", "c2"),
            k=_get_int(sec, "similarity_fit", "symbols_per_word"))
    except ValueError as exc:
        raise ConfigError(f"similarity_fit: {exc}") from exc


def _parse_rate(doc: dict) -> RateConfig:
    sec = _section(doc, "rate")
    try:
        return RateConfig(
            mu=_get_int(sec, "rate", "bit_symbols_per_word"),
            ber=_get_number(sec, "rate", "ber"),
            m_th=_get_number(sec, "rate", "similarity_threshold"),
            r_out=_get_number(sec, "rate", "outage_rate_threshold"),
            use_capacity=_get_bool(sec, "rate", "use_capacity", False),
            info_per_word=_get_number(sec, "rate", "info_per_word",
                                      required=False, default=1.0))
    except ValueError as exc:
        raise ConfigError(f"rate: {exc}") from exc


def _parse_sweep(doc: dict, fit: SimilarityFit) -> tuple[str, tuple[float, ...]]:
    sec = _section(doc, "sweep")
    axis = sec.get("axis")
    if axis not in _SWEEP_AXES:
        raise ConfigError(f"sweep.axis: expected one of {_SWEEP_AXES}, got {axis!r}")
    if "grid" in sec:
        raw = sec["grid"]
        if not isinstance(raw, list) or len(raw) < 1:
            raise ConfigError("sweep.grid: expected a non-empty list of numbers")
        grid = []
        for i, value in enumerate(raw):
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"sweep.grid[{i}]: expected a finite number, got {value!r}")
            grid.append(float(value))
    else:
        start = _get_number(sec, "sweep", "start")
        stop = _get_number(sec, "sweep", "stop")
        points = _get_int(sec, "sweep", "points")
        if points < 1:
            raise ConfigError(f"sweep.points: must be >= 1, got {points}")
        grid = [float(v) for v in np.linspace(start, stop, points)]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("sweep.grid: values must be strictly increasing")
    if axis in ("radius_m", "r_out") and grid[0] <= 0.0:
        raise ConfigError(f"sweep.grid: {axis} values must be positive")
    if axis == "m_th" and not (fit.a1 < grid[0] and grid[-1] < fit.a2):
        raise ConfigError(
            f"sweep.grid: similarity thresholds must lie strictly inside ({fit.a1}, {fit.a2})")
    return axis, tuple(grid)


def _parse_counts(doc: dict, key: str, num_users: int) -> tuple[int, int]:
    sec = doc.get(key)
    if sec is None:
        return 1, num_users
    if not isinstance(sec, dict):
        raise ConfigError(f"{key}: expected a JSON object")
    lo = _get_int(sec, key, "lo", required=False, default=1)
    hi = sec.get("hi")
    if hi is None:
        hi = num_users
    elif isinstance(hi, bool) or not isinstance(hi, int):
        raise ConfigError(f"{key}.hi: expected an integer or null, got {hi!r}")
    if not (0 <= lo <= hi <= num_users):
        raise ConfigError(f"{key}: need 0 <= lo <= hi <= num_users={num_users}, got ({lo}, {hi})")
    return lo, hi


def parse_scenario_config(doc: dict, label: str = "run") -> ScenarioConfig:
    """Validate a config dict into a resolved ScenarioConfig."""
    if not isinstance(doc, dict):
        raise ConfigError("config root: expected a JSON object")
    params = _parse_network(doc)
    fit = _parse_fit(doc)
    cfg = _parse_rate(doc)
    if not (fit.a1 < cfg.m_th < fit.a2):
        raise ConfigError(
            f"rate.similarity_threshold: {cfg.m_th} must lie strictly inside "
            f"the fit asymptotes ({fit.a1}, {fit.a2})")
    axis, grid = _parse_sweep(doc, fit)
    outage_lo, outage_hi = _parse_counts(doc, "outage_counts", params.num_users)
    util_lo, util_hi = _parse_counts(doc, "util_counts", params.num_users)
    mc = doc.get("mc", {})
    if not isinstance(mc, dict):
        raise ConfigError("mc: expected a JSON object")
    samples = _get_int(mc, "mc", "samples", required=False, default=0)
    if samples < 0:
        raise ConfigError(f"mc.samples: must be >= 0, got {samples}")
    seed = _get_int(mc, "mc", "seed", required=False, default=0)
    return ScenarioConfig(
        scenario=Scenario(params=params, fit=fit, cfg=cfg),
        sweep_axis=axis, grid=grid,
        outage_lo=outage_lo, outage_hi=outage_hi,
        util_lo=util_lo, util_hi=util_hi,
        mc_samples=samples, mc_seed=seed, label=label)


def scenario_config_dict(sc: ScenarioConfig) -> dict:
    """Canonical config dict of a resolved scenario (manifest payload)."""
    params, fit, cfg = sc.scenario.params, sc.scenario.fit, sc.scenario.cfg
    return {
        "network": {
            "num_users": params.num_users,
            "tx_power_w": params.tx_power_w,
            "total_bandwidth_hz": params.total_bandwidth_hz,
            "carrier_freq_hz": params.carrier_freq_hz,
            "noise_density_w_per_hz": params.noise_density_w_per_hz,
            "pathloss_exp": params.pathloss_exp,
            "cell_radius_m": params.cell_radius_m,
        },
        "similarity_fit": {
            "a1": fit.a1, "a2": fit.a2, "c1": fit.c1, "c2": fit.c2,
            "symbols_per_word": fit.k,
        },
        "rate": {
            "bit_symbols_per_word": cfg.mu,
            "ber": cfg.ber,
            "use_capacity": cfg.use_capacity,
            "similarity_threshold": cfg.m_th,
            "outage_rate_threshold": cfg.r_out,
            "info_per_word": cfg.info_per_word,
        },
        "sweep": {"axis": sc.sweep_axis, "grid": list(sc.grid)},
        "outage_counts": {"lo": sc.outage_lo, "hi": sc.outage_hi},
        "util_counts": {"lo": sc.util_lo, "hi": sc.util_hi},
        "mc": {"samples": sc.mc_samples, "seed": sc.mc_seed},
    }


def load_config(path: str | Path) -> dict:
    """Load a config document; a manifest is unwrapped to its config."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and "config" in doc and doc.get("kind") == "semcell-manifest":
        inner = doc["config"]
        if not isinstance(inner, dict):
            raise ConfigError("manifest config: expected a JSON object")
        return inner
    return doc


# ---------------------------------------------------------------------------
# sweep evaluation
# ---------------------------------------------------------------------------

def _point_state(sc: ScenarioConfig, axis_value: float, thr_shared):
    """Scenario (params, cfg, thresholds) at one grid point."""
    params = sc.scenario.params
    cfg = sc.scenario.cfg
    if sc.sweep_axis == "radius_m":
        return replace(params, cell_radius_m=axis_value), cfg, thr_shared
    if sc.sweep_axis == "edge_snr_db":
        radius = (snr_scale(params) / db_to_linear(axis_value)) ** (1.0 / params.pathloss_exp)
        return replace(params, cell_radius_m=radius), cfg, thr_shared
    if sc.sweep_axis == "m_th":
        cfg = replace(cfg, m_th=axis_value)
    else:
        cfg = replace(cfg, r_out=axis_value)
    return params, cfg, thresholds(cfg, sc.scenario.fit)


_MC_EVENTS = {
    "pi_h": lambda sc: HybridOutage(),
    "pi_b": lambda sc: BitOutage(),
    "pi_s": lambda sc: SemOutage(),
    "net_all": lambda sc: ExactCount(sc.scenario.params.num_users),
    "net_any": lambda sc: RangeCount(1, sc.scenario.params.num_users),
    "s_range": lambda sc: RangeCount(sc.outage_lo, sc.outage_hi),
    "pi_g": lambda sc: SemUtilization(),
    "util_range": lambda sc: RangeCount(sc.util_lo, sc.util_hi, indicator=SemUtilization()),
}


def evaluate_point(sc: ScenarioConfig, axis_value: float, thr_shared,
                   workers: int | None = None) -> dict[str, float]:
    """All metric columns at one grid point (analytic, plus MC if enabled)."""
    params, cfg, thr = _point_state(sc, axis_value, thr_shared)
    report = outage_report(thr, params)
    num_users = params.num_users
    row = {
        "axis_value": axis_value,
        "pi_h": report.pi_h,
        "pi_b": report.pi_b,
        "pi_s": report.pi_s,
        "net_all": network_outage(report.pi_h, num_users, NetOutageMode.ALL_IN_OUTAGE),
        "net_any": network_outage(report.pi_h, num_users, NetOutageMode.AT_LEAST_ONE),
        "s_range": binom_range_prob(report.pi_h, num_users, sc.outage_lo, sc.outage_hi),
        "pi_g": report.pi_g,
        "util_range": binom_range_prob(report.pi_g, num_users, sc.util_lo, sc.util_hi),
    }
    if sc.mc_samples > 0:
        point_scenario = Scenario(params=params, fit=sc.scenario.fit, cfg=cfg)
        mc_sc = replace(sc, scenario=point_scenario)
        events = [_MC_EVENTS[name](mc_sc) for name in _METRICS]
        estimates = estimate_many(events, sc.mc_samples, sc.mc_seed,
                                  point_scenario, workers=workers)
        for name, est in zip(_METRICS, estimates):
            row[f"mc_{name}"] = est.estimate
            row[f"mc_{name}_stderr"] = est.std_error
    return row


def evaluate_sweep(sc: ScenarioConfig, workers: int | None = None) -> list[dict[str, float]]:
    """Rows for every grid point, in axis order."""
    fit = sc.scenario.fit
    thr_shared = None
    if sc.sweep_axis in ("radius_m", "edge_snr_db"):
        thr_shared = thresholds(sc.scenario.cfg, fit)
    return [evaluate_point(sc, value, thr_shared, workers=workers) for value in sc.grid]


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

def _format_value(value: float) -> str:
    return repr(float(value))


def write_csv(path: Path, rows: list[dict[str, float]], mc_enabled: bool) -> None:
    columns = ["axis_value", *_METRICS]
    if mc_enabled:
        for name in _METRICS:
            columns.append(f"mc_{name}")
            columns.append(f"mc_{name}_stderr")
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_value(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def derived_constants(sc: ScenarioConfig) -> dict:
    """Derived quantities recorded in the manifest for the nominal config."""
    params, fit, cfg = sc.scenario.params, sc.scenario.fit, sc.scenario.cfg
    thr = thresholds(cfg, fit)
    return {
        "snr_scale": snr_scale(params),
        "snr_gap": gamma_gap(cfg),
        "g_min": thr.g_min,
        "g_max": thr.g_max,
        "g_bit": thr.g_bit,
        "g_sem": thr.g_sem,
        "regime": thr.regime.value,
        "mean_edge_snr_db": linear_to_db(mean_edge_snr(params)),
    }


def write_manifest(path: Path, sc: ScenarioConfig, preset: str | None) -> None:
    manifest = {
        "kind": "semcell-manifest",
        "label": sc.label,
        "preset": preset,
        "config": scenario_config_dict(sc),
        "derived": derived_constants(sc),
        "versions": {
            "semcell": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")


def run_scenario(sc: ScenarioConfig, out_dir: str | Path,
                 workers: int | None = None, preset: str | None = None) -> tuple[Path, Path]:
    """Evaluate one sweep and write its CSV and manifest; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = evaluate_sweep(sc, workers=workers)
    csv_path = out / f"{sc.label}.csv"
    manifest_path = out / f"{sc.label}.manifest.json"
    write_csv(csv_path, rows, mc_enabled=sc.mc_samples > 0)
    write_manifest(manifest_path, sc, preset=preset)
    return csv_path, manifest_path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _apply_cli_mc(doc: dict, args) -> dict:
    if args.mc_samples is None and args.seed is None:
        return doc
    mc = dict(doc.get("mc", {}))
    if args.mc_samples is not None:
        mc["samples"] = args.mc_samples
    if args.seed is not None:
        mc["seed"] = args.seed
    out = dict(doc)
    out["mc"] = mc
    return out


def _cmd_run(args) -> int:
    doc = _apply_cli_mc(load_config(args.config), args)
    if args.preset:
        labelled = expand_preset(doc, args.preset)
    else:
        labelled = [(Path(args.config).stem, doc)]
    for label, variant_doc in labelled:
        sc = parse_scenario_config(variant_doc, label=label)
        csv_path, manifest_path = run_scenario(sc, args.out, preset=args.preset)
        print(f"wrote {csv_path} and {manifest_path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    doc = _apply_cli_mc(load_config(args.config), args)
    if "sweep" not in doc:
        doc = dict(doc)
        doc["sweep"] = {"axis": "radius_m",
                        "grid": [doc.get("network", {}).get("cell_radius_m", 1.0)]}
    sc = parse_scenario_config(doc, label="validate")
    samples = sc.mc_samples if sc.mc_samples > 0 else 1_000_000
    sc = replace(sc, mc_samples=samples)
    thr = thresholds(sc.scenario.cfg, sc.scenario.fit)
    row = evaluate_point(sc, sc.scenario.params.cell_radius_m if sc.sweep_axis == "radius_m"
                         else sc.grid[0], thr)
    failures = 0
    print(f"closed form vs Monte Carlo at n={samples} (tolerance 3 standard errors)")
    for name in _METRICS:
        analytic = row[name]
        mc_value = row[f"mc_{name}"]
        stderr = row[f"mc_{name}_stderr"]
        ok = abs(analytic - mc_value) <= 3.0 * stderr
        failures += 0 if ok else 1
        print(f"  {name:>10}: analytic={analytic:.6e} mc={mc_value:.6e} "
              f"stderr={stderr:.2e} {'ok' if ok else 'MISMATCH'}")
    if failures:
        print(f"{failures} metric(s) outside 3 standard errors", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _nominal_scenario(args) -> ScenarioConfig:
    doc = load_config(args.config)
    if "sweep" not in doc:
        doc = dict(doc)
        doc["sweep"] = {"axis": "radius_m",
                        "grid": [doc.get("network", {}).get("cell_radius_m", 1.0)]}
    return parse_scenario_config(doc, label="design")


def _cmd_design_radius(args) -> int:
    sc = _nominal_scenario(args)
    params, fit, cfg = sc.scenario.params, sc.scenario.fit, sc.scenario.cfg
    if not (0.0 < args.pth < 1.0):
        raise ConfigError(f"--pth must lie in (0, 1), got {args.pth}")
    if not (1 <= args.ll <= params.num_users):
        raise ConfigError(f"--ll must lie in [1, {params.num_users}], got {args.ll}")
    thr = thresholds(cfg, fit)
    target = DesignTarget.for_outage_cap(args.pth, args.ll, params.num_users)
    solution = radius_for_outage_threshold(target, thr, params)
    print(json.dumps({
        "radius_m": solution.radius,
        "method": solution.method.value,
        "residual": solution.residual,
        "u_th": target.u_th,
        "y_th": thr.outage_cdf_argument(),
        "regime": thr.regime.value,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_design_util(args) -> int:
    sc = _nominal_scenario(args)
    params, fit, cfg = sc.scenario.params, sc.scenario.fit, sc.scenario.cfg
    if not (0 <= args.ll <= args.lu <= params.num_users):
        raise ConfigError(
            f"need 0 <= --ll <= --lu <= num_users={params.num_users}, got ({args.ll}, {args.lu})")
    thr = thresholds(cfg, fit)
    result = optimal_sem_util_radius(params.num_users, args.ll, args.lu, thr, params)
    best = result.best
    print(json.dumps({
        "semantic_possible": result.semantic_possible,
        "level_target": result.level_target,
        "level_attainable": result.level_attainable,
        "solutions": [
            {"radius_m": s.radius, "equation": s.equation,
             "range_prob": s.range_prob, "residual": s.residual}
            for s in result.solutions
        ],
        "best_radius_m": None if best is None else best.radius,
    }, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semcell",
        description="Reliability metrics and cell sizing for a hybrid bit/semantic downlink.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="sweep a scenario and write CSV + manifest")
    run_p.add_argument("--config", required=True, help="scenario config or manifest JSON")
    run_p.add_argument("--preset", choices=sorted(PRESETS), help="expand a canned figure preset")
    run_p.add_argument("--out", default=".", help="output directory")
    run_p.add_argument("--mc-samples", type=int, default=None, help="Monte Carlo samples per point")
    run_p.add_argument("--seed", type=int, default=None, help="Monte Carlo seed")
    run_p.set_defaults(func=_cmd_run)

    val_p = sub.add_parser("validate", help="check closed forms against the simulation oracle")
    val_p.add_argument("--config", required=True)
    val_p.add_argument("--mc-samples", type=int, default=None)
    val_p.add_argument("--seed", type=int, default=None)
    val_p.set_defaults(func=_cmd_validate)

    design_p = sub.add_parser("design", help="radius design solvers")
    design_sub = design_p.add_subparsers(dest="design_command", required=True)
    radius_p = design_sub.add_parser("radius", help="largest radius meeting an outage-count cap")
    radius_p.add_argument("--config", required=True)
    radius_p.add_argument("--pth", type=float, required=True, help="outage probability threshold")
    radius_p.add_argument("--ll", type=int, required=True, help="minimum outage count")
    radius_p.set_defaults(func=_cmd_design_radius)
    util_p = design_sub.add_parser("util", help="radius maximizing a served-count range probability")
    util_p.add_argument("--config", required=True)
    util_p.add_argument("--ll", type=int, required=True, help="lowest served count")
    util_p.add_argument("--lu", type=int, required=True, help="highest served count")
    util_p.set_defaults(func=_cmd_design_util)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
