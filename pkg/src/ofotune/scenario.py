"""Scenario configs, trace serialization, error metric and experiment drivers.

A scenario is one YAML file: plant selection, controller parameters, horizon,
optional setpoint reference, optional manual-tuning sweep, optional named
per-mode parameter overrides. Runs write one CSV per trace plus a summary
file; everything is deterministic, so re-running a scenario byte-reproduces
its outputs.

CSV schema (bit-exact contract):
    k,u_1..u_nu,y_1..y_ny,phi,alpha,w_1..w_nu,S_eig_1..S_eig_nu,D_fro,active,adapted
floats carry 17 significant digits; `active` is a ;-joined index list;
`adapted` is 0/1.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .controller import RunTrace, run
from .errors import ConfigError
from .model import ConstraintSet, OfoParams, PlantModel, spd_project_check
from .plants import (
    CstrParams,
    GasLiftSurrogate,
    WellCurve,
    cstr_plant,
    gaslift_plant,
    piecewise_constant,
    rosenbrock_plant,
    toy_plant,
)

PLANTS = ("toy", "rosenbrock", "gaslift", "cstr")


@dataclass
class SweepCase:
    label: str
    alpha: float
    S: np.ndarray


@dataclass
class ScenarioConfig:
    plant: str
    params: OfoParams
    u0: np.ndarray
    n_iters: int
    plant_options: dict = field(default_factory=dict)
    reference: Optional[list] = None          # list of (time, value)
    sweep: list = field(default_factory=list)  # list of SweepCase
    modes: dict = field(default_factory=dict)  # name -> raw param overrides
    output_dir: Path = Path("out")
    error_horizon: int = 60
    target_phi: Optional[float] = None
    target_tol: float = 1e-3
    band_rel: float = 1e-3


@dataclass
class ErrorReport:
    epsilon: float
    cases: list = field(default_factory=list)  # dicts: label, alpha, epsilon, ratio
    ratio_vs_baseline: Optional[float] = None


def _parse_matrix(raw, name: str) -> np.ndarray:
    try:
        M = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: cannot parse matrix from {raw!r}") from exc
    if M.ndim == 0:
        return M.reshape(1, 1)
    if M.ndim != 2:
        raise ConfigError(f"{name}: expected nested row-major lists, got shape {M.shape}")
    return M


def _parse_params(raw: dict, name: str = "params") -> OfoParams:
    if "S0" not in raw:
        raise ConfigError(f"{name}: missing S0")
    data = dict(raw)
    data["S0"] = _parse_matrix(data["S0"], f"{name}.S0")
    try:
        return OfoParams(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"scenario {path} is not a mapping")
    try:
        plant = raw["plant"]["kind"]
        if plant not in PLANTS:
            raise ConfigError(f"unknown plant {plant!r}, expected one of {PLANTS}")
        params = _parse_params(raw["params"])
        u0 = np.array(raw["u0"], dtype=float)
        n_iters = int(raw["n_iters"])
    except KeyError as exc:
        raise ConfigError(f"scenario {path} missing key {exc}") from exc

    reference = None
    if raw.get("reference") is not None:
        reference = [(float(t), float(v)) for t, v in raw["reference"]]

    sweep = []
    for i, case in enumerate(raw.get("sweep") or [], start=1):
        S = _parse_matrix(case["S"], f"sweep[{i}].S")
        if not spd_project_check(S, 0.0):
            raise ConfigError(f"sweep[{i}].S is not symmetric positive definite")
        sweep.append(SweepCase(label=str(case.get("label", f"case_{i}")),
                               alpha=float(case["alpha"]), S=S))

    cfg = ScenarioConfig(
        plant=plant,
        params=params,
        u0=u0,
        n_iters=n_iters,
        plant_options={k: v for k, v in raw["plant"].items() if k != "kind"},
        reference=reference,
        sweep=sweep,
        modes={str(k): dict(v) for k, v in (raw.get("modes") or {}).items()},
        output_dir=Path(raw.get("output_dir", "out")),
        error_horizon=int(raw.get("error_horizon", 60)),
        target_phi=(float(raw["target_phi"]) if raw.get("target_phi") is not None else None),
        target_tol=float(raw.get("target_tol", 1e-3)),
        band_rel=float(raw.get("band_rel", 1e-3)),
    )
    return cfg


def build_plant(cfg: ScenarioConfig):
    """Fresh (PlantModel, ConstraintSet) for one run. CSTR plants are stateful."""
    opts = cfg.plant_options
    if cfg.plant == "toy":
        return toy_plant()
    if cfg.plant == "rosenbrock":
        return rosenbrock_plant()
    if cfg.plant == "gaslift":
        surrogate = GasLiftSurrogate()
        if "wells" in opts:
            wells = tuple(WellCurve(a=float(a), b=float(b)) for a, b in opts["wells"])
            surrogate = dataclasses.replace(surrogate, wells=wells)
        if "budget" in opts:
            surrogate = dataclasses.replace(surrogate, budget=float(opts["budget"]))
        return gaslift_plant(surrogate)
    if cfg.plant == "cstr":
        cstr_kwargs = {k: float(v) for k, v in opts.get("cstr", {}).items()}
        params = CstrParams(**cstr_kwargs) if cstr_kwargs else CstrParams()
        return cstr_plant(params=params, reference=cfg.reference)
    raise ConfigError(f"unknown plant {cfg.plant!r}")


def params_with_overrides(params: OfoParams, overrides: dict) -> OfoParams:
    data = {f.name: getattr(params, f.name) for f in dataclasses.fields(OfoParams)}
    for key, value in overrides.items():
        if key not in data:
            raise ConfigError(f"unknown parameter override {key!r}")
        data[key] = _parse_matrix(value, "S0") if key == "S0" else value
    return OfoParams(**data)


# -- trace serialization ------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trace_to_csv(trace: RunTrace, path) -> None:
    n_u = trace.records[0].u.size
    n_y = trace.records[0].y.size
    cols = (
        ["k"]
        + [f"u_{i+1}" for i in range(n_u)]
        + [f"y_{i+1}" for i in range(n_y)]
        + ["phi", "alpha"]
        + [f"w_{i+1}" for i in range(n_u)]
        + [f"S_eig_{i+1}" for i in range(n_u)]
        + ["D_fro", "active", "adapted"]
    )
    lines = [",".join(cols)]
    for r in trace.records:
        row = (
            [str(r.k)]
            + [_fmt(v) for v in r.u]
            + [_fmt(v) for v in r.y]
            + [_fmt(r.phi), _fmt(r.alpha)]
            + [_fmt(v) for v in r.w]
            + [_fmt(v) for v in r.S_eigs]
            + [_fmt(r.D_norm)]
            + [";".join(str(i) for i in r.active_constraints)]
            + ["1" if r.adapted else "0"]
        )
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


# -- error metric -------------------------------------------------------------

def compute_error(trace: RunTrace, reference, n: int = 60, channel: int = -1,
                  dt: float = 1.0) -> float:
    """Mean squared tracking error over the first n records.

    Record k holds the measurement taken at t = (k+1)*dt, so it is scored
    against the setpoint in force at that time.
    """
    if reference is None or (hasattr(reference, "__len__") and len(reference) == 0):
        raise ConfigError("error metric needs a reference trajectory")
    if len(trace.records) < n:
        raise ConfigError(f"trace has {len(trace.records)} records, need {n}")
    ref = reference if callable(reference) else piecewise_constant(reference)
    total = 0.0
    for k in range(n):
        y = trace.records[k].y[channel]
        total += (y - ref((k + 1) * dt)) ** 2
    return total / n


# -- drivers ------------------------------------------------------------------

def _single(cfg: ScenarioConfig, params: OfoParams) -> RunTrace:
    plant, cons = build_plant(cfg)
    return run(plant, cons, params, cfg.u0, cfg.n_iters)


def run_scenario(cfg: ScenarioConfig, out_dir=None, mode: Optional[str] = None,
                 iters: Optional[int] = None) -> ErrorReport:
    """Execute a scenario: the sweep when one is configured, else one run."""
    if iters is not None:
        cfg = dataclasses.replace(cfg, n_iters=int(iters))
    out = Path(out_dir) if out_dir is not None else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    params = cfg.params
    if mode is not None:
        if mode not in cfg.modes:
            raise ConfigError(f"mode {mode!r} not defined in scenario (has {sorted(cfg.modes)})")
        params = params_with_overrides(params, cfg.modes[mode])

    # a named mode always means one run; otherwise a configured sweep runs
    if mode is not None or not cfg.sweep:
        trace = _single(cfg, params)
        trace_to_csv(trace, out / (f"{mode}.csv" if mode else "run.csv"))
        eps = np.nan
        if cfg.reference is not None:
            eps = compute_error(trace, cfg.reference, n=min(cfg.error_horizon, cfg.n_iters))
        _write_summary(out / "summary.csv", [_summary_row("run" if mode is None else mode,
                                                          params.alpha0, eps, trace)])
        return ErrorReport(epsilon=float(eps), cases=[])

    rows = []
    cases = []
    for case in cfg.sweep:
        case_params = params_with_overrides(
            params,
            {"alpha0": case.alpha, "alpha_max": case.alpha, "S0": case.S,
             "mode": "fixed", "step_adaptation": False},
        )
        trace = _single(cfg, case_params)
        trace_to_csv(trace, out / f"{case.label}.csv")
        eps = compute_error(trace, cfg.reference, n=min(cfg.error_horizon, cfg.n_iters))
        rows.append(_summary_row(case.label, case.alpha, eps, trace))
        cases.append({"label": case.label, "alpha": case.alpha, "epsilon": eps})
    base = cases[0]["epsilon"]
    for c in cases:
        c["ratio_vs_baseline"] = c["epsilon"] / base if base > 0 else np.inf
    _write_summary(out / "summary.csv", rows)
    best = min(c["epsilon"] for c in cases)
    return ErrorReport(epsilon=best, cases=cases,
                       ratio_vs_baseline=cases[-1]["ratio_vs_baseline"])


def _summary_row(label, alpha, eps, trace: RunTrace):
    phis = trace.phis
    return {
        "label": label,
        "alpha": alpha,
        "epsilon": eps,
        "final_phi": float(phis[-1]),
        "best_phi": float(phis.min()),
        "n_records": len(trace.records),
        "termination": trace.termination,
    }


def _write_summary(path, rows) -> None:
    cols = ["label", "alpha", "epsilon", "final_phi", "best_phi", "n_records", "termination"]
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(
            str(r[c]) if c in ("label", "n_records", "termination") else _fmt(r[c])
            for c in cols
        ))
    Path(path).write_text("\n".join(lines) + "\n")


def compare_modes(cfg: ScenarioConfig, modes, out_dir=None) -> list:
    """Run the scenario once per named mode with identical initial conditions.

    Returns summary rows: final/best cost, iterations to the configured
    target (absolute target_phi when given, else a relative band around the
    best cost found across modes) and the count of cost increases > 1e-6.
    """
    out = Path(out_dir) if out_dir is not None else cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    traces = {}
    for name in modes:
        if name not in cfg.modes:
            raise ConfigError(f"mode {name!r} not defined in scenario (has {sorted(cfg.modes)})")
        params = params_with_overrides(cfg.params, cfg.modes[name])
        trace = _single(cfg, params)
        trace_to_csv(trace, out / f"{name}.csv")
        traces[name] = trace

    best_overall = min(float(t.phis.min()) for t in traces.values())
    rows = []
    for name in modes:
        trace = traces[name]
        phis = trace.phis
        if cfg.target_phi is not None:
            hit = np.nonzero(np.abs(phis - cfg.target_phi) <= cfg.target_tol)[0]
        else:
            band = abs(best_overall) * cfg.band_rel
            hit = np.nonzero(phis <= best_overall + band)[0]
        eps = np.nan
        if cfg.reference is not None:
            eps = compute_error(trace, cfg.reference, n=min(cfg.error_horizon, cfg.n_iters))
        rows.append({
            "mode": name,
            "final_phi": float(phis[-1]),
            "best_phi": float(phis.min()),
            "epsilon": float(eps),
            "iters_to_target": int(hit[0]) if hit.size else -1,
            "increases": int(np.sum(np.diff(phis) > 1e-6)),
            "n_records": len(trace.records),
        })
    cols = ["mode", "final_phi", "best_phi", "epsilon", "iters_to_target", "increases", "n_records"]
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(
            _fmt(r[c]) if c in ("final_phi", "best_phi", "epsilon") else str(r[c]) for c in cols
        ))
    (out / "comparison.csv").write_text("\n".join(lines) + "\n")
    return rows
