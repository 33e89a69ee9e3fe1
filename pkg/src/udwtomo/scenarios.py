"""End-to-end experiment pipelines emitting deterministic CSV artifacts.

Each scenario reproduces one of the study's figures or protocol checks at
desk scale: two-point-function curves against separation for the four field
states, classical-wave and wavepacket spacetime grids, the full
forward-simulate/invert tomography roundtrip on a 16-region lattice, the
multipole convergence sweep, and the shot-noise scaling study.

All lengths are quoted in units of the region width ell.  Output CSVs are
UTF-8 with header row, LF line endings and 17-significant-digit floats;
identical config + seed reproduces byte-identical files.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable

import numpy as np

from . import multipole, tomography
from .detector import correlation_record, sample_record
from .errors import ConfigError, UdwTomoError
from .kernels import (FieldState, assemble_kernels, hadamard_point,
                      phi0_coherent, F_oneparticle,
                      wightman_smeared_closed, wightman_smeared_quadrature)
from .numerics import fit_loglog_slope
from .smearing import GaussianRegion
from .spacetime import Event, LatticeSpec, build_lattice

__all__ = ["ScenarioConfig", "SCENARIO_IDS", "validate_config", "run", "list_scenarios"]


@dataclass
class ScenarioConfig:
    """Resolved, validated scenario parameters."""

    scenario_id: str
    output_dir: str
    seed: int
    ell: float
    tol: float
    threads: int | None
    enable_quadrature_columns: bool
    beta: float | None = None
    delta: float | None = None
    s_values: list[float] = dc_field(default_factory=list)
    anchor: Event | None = None
    lattice: LatticeSpec | None = None
    lam: float | None = None
    state_tag: str = "vacuum"
    shots_list: list[int] = dc_field(default_factory=list)
    repeats: int = 4
    grid_t: tuple[float, float, int] | None = None
    grid_x: tuple[float, float, int] | None = None
    ell_grid: list[float] = dc_field(default_factory=list)
    base_config: tuple[float, float] | None = None


_GLOBAL_DEFAULTS: dict = {
    "output_dir": "out",
    "seed": 20250810,
    "ell": 1.0,
    "tol": 1e-10,
    "threads": None,
    "enable_quadrature_columns": False,
}

_S_DEFAULT = {"start": 0.5, "stop": 20.0, "step": 0.25}
_LATTICE_DEFAULT = {"n_space": 2, "n_time": 2, "spacing_space": 10.0,
                    "spacing_time": 10.0, "origin": {"t": 0.0, "x": 0.0, "y": 0.0, "z": 0.0}}

_SCENARIO_DEFAULTS: dict[str, dict] = {
    "vacuum_curves": {"s_over_ell": dict(_S_DEFAULT)},
    "thermal_curves": {"s_over_ell": dict(_S_DEFAULT), "beta": 50.0},
    # delta = 3/2 ell and the (t, x) = (6, -6) ell anchor follow the figure
    # caption; the body text quotes delta = 4 ell for the same plot, so the
    # width is left configurable.
    "coherent_curves": {"s_over_ell": dict(_S_DEFAULT), "delta": 1.5,
                        "anchor": {"t": 6.0, "x": -6.0, "y": 0.0, "z": 0.0}},
    "coherent_field_grid": {"delta": 1.5,
                            "grid": {"t": {"start": -12.0, "stop": 12.0, "n": 97},
                                     "x": {"start": -12.0, "stop": 12.0, "n": 97}}},
    "oneparticle_curves": {"s_over_ell": {"start": 0.5, "stop": 130.0, "step": 0.5},
                           "delta": 10.0,
                           "anchor": {"t": -60.0, "x": -60.0, "y": 0.0, "z": 0.0}},
    "oneparticle_diff_grid": {"delta": 10.0,
                              "anchor": {"t": -60.0, "x": -60.0, "y": 0.0, "z": 0.0},
                              "grid": {"t": {"start": -150.0, "stop": 150.0, "n": 101},
                                       "x": {"start": -150.0, "stop": 150.0, "n": 101}}},
    "tomography_roundtrip": {"lattice": dict(_LATTICE_DEFAULT),
                             "lambda": 2.0 * math.pi, "state": "vacuum"},
    "convergence_sweep": {"base_config": {"dt": 0.0, "dr": 1.0},
                          "ell_grid": [round(v, 10) for v in
                                       np.geomspace(0.02, 0.1, 7).tolist()],
                          "state": "vacuum", "tol": 1e-12},
    "shot_noise_study": {"lattice": dict(_LATTICE_DEFAULT), "lambda": 2.0 * math.pi,
                         "shots_list": [10**3, 10**4, 10**5, 10**6, 10**7],
                         "repeats": 4},
}

_KNOWN_KEYS = {
    "scenario_id", "output_dir", "seed", "ell", "tol", "threads",
    "enable_quadrature_columns", "beta", "delta", "s_over_ell", "anchor",
    "lattice", "lambda", "state", "shots_list", "repeats", "grid",
    "ell_grid", "base_config",
}

SCENARIO_IDS = tuple(_SCENARIO_DEFAULTS)


def _require_number(raw: dict, key: str, positive: bool = False) -> float:
    v = raw.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise ConfigError(f"field {key!r} must be a finite number, got {v!r}", field=key)
    if positive and v <= 0:
        raise ConfigError(f"field {key!r} must be positive, got {v!r}", field=key)
    return float(v)


def _parse_event(d: dict, key: str) -> Event:
    if not isinstance(d, dict):
        raise ConfigError(f"field {key!r} must be an object with t/x/y/z", field=key)
    try:
        return Event(float(d.get("t", 0.0)), float(d.get("x", 0.0)),
                     float(d.get("y", 0.0)), float(d.get("z", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {key!r}: {exc}", field=key) from exc


def _parse_s_values(raw: dict) -> list[float]:
    spec = raw["s_over_ell"]
    if isinstance(spec, list):
        vals = [float(v) for v in spec]
    elif isinstance(spec, dict):
        try:
            start, stop, step = spec["start"], spec["stop"], spec["step"]
        except KeyError as exc:
            raise ConfigError("field 's_over_ell' needs start/stop/step",
                              field="s_over_ell") from exc
        if step <= 0 or stop < start:
            raise ConfigError("field 's_over_ell' range must be increasing",
                              field="s_over_ell")
        n = int(round((stop - start) / step))
        vals = [start + k * step for k in range(n + 1) if start + k * step <= stop + 1e-9]
    else:
        raise ConfigError("field 's_over_ell' must be a range object or list",
                          field="s_over_ell")
    if not vals or any(v <= 0 for v in vals):
        raise ConfigError("field 's_over_ell' values must be strictly positive",
                          field="s_over_ell")
    return vals


def _parse_grid(raw: dict) -> tuple[tuple[float, float, int], tuple[float, float, int]]:
    grid = raw["grid"]
    out = []
    for axis in ("t", "x"):
        ax = grid.get(axis) if isinstance(grid, dict) else None
        if not isinstance(ax, dict) or not {"start", "stop", "n"} <= set(ax):
            raise ConfigError(f"field 'grid.{axis}' needs start/stop/n", field="grid")
        n = ax["n"]
        if not isinstance(n, int) or n < 2:
            raise ConfigError(f"field 'grid.{axis}.n' must be an integer >= 2", field="grid")
        out.append((float(ax["start"]), float(ax["stop"]), n))
    return out[0], out[1]


def _parse_lattice(raw: dict, ell: float) -> LatticeSpec:
    lat = raw["lattice"]
    if not isinstance(lat, dict):
        raise ConfigError("field 'lattice' must be an object", field="lattice")
    try:
        return LatticeSpec(
            n_space=int(lat["n_space"]), n_time=int(lat["n_time"]),
            spacing_space=float(lat["spacing_space"]) * ell,
            spacing_time=float(lat["spacing_time"]) * ell,
            origin=_parse_event(lat.get("origin", {}), "lattice.origin"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"field 'lattice': {exc}", field="lattice") from exc


def validate_config(raw: dict) -> ScenarioConfig:
    """Resolve a raw config dict (snake_case keys) against scenario defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object", field=None)
    sid = raw.get("scenario_id")
    if sid not in _SCENARIO_DEFAULTS:
        raise ConfigError(
            f"field 'scenario_id' must be one of {sorted(_SCENARIO_DEFAULTS)}, got {sid!r}",
            field="scenario_id")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config field(s): {sorted(unknown)}",
                          field=sorted(unknown)[0])
    merged = dict(_GLOBAL_DEFAULTS)
    merged.update(_SCENARIO_DEFAULTS[sid])
    merged.update({k: v for k, v in raw.items() if v is not None})

    cfg = ScenarioConfig(
        scenario_id=sid,
        output_dir=str(merged["output_dir"]),
        seed=int(merged["seed"]),
        ell=_require_number(merged, "ell", positive=True),
        tol=_require_number(merged, "tol", positive=True),
        threads=int(merged["threads"]) if merged.get("threads") else None,
        enable_quadrature_columns=bool(merged["enable_quadrature_columns"]),
    )
    ell = cfg.ell
    if "beta" in merged and merged.get("beta") is not None:
        cfg.beta = _require_number(merged, "beta", positive=True) * ell
    if "delta" in merged and merged.get("delta") is not None:
        cfg.delta = _require_number(merged, "delta", positive=True) * ell
    if "s_over_ell" in merged:
        cfg.s_values = _parse_s_values(merged)
    if "anchor" in merged:
        a = _parse_event(merged["anchor"], "anchor")
        cfg.anchor = Event(a.t * ell, a.x * ell, a.y * ell, a.z * ell)
    if "lattice" in merged:
        cfg.lattice = _parse_lattice(merged, ell)
    if "lambda" in merged:
        cfg.lam = _require_number(merged, "lambda", positive=True)
    if "state" in merged:
        if merged["state"] not in ("vacuum", "thermal"):
            raise ConfigError("field 'state' must be 'vacuum' or 'thermal'", field="state")
        cfg.state_tag = merged["state"]
        if cfg.state_tag == "thermal" and cfg.beta is None:
            raise ConfigError("thermal state requires field 'beta'", field="beta")
    if "shots_list" in merged:
        shots = merged["shots_list"]
        if (not isinstance(shots, list) or not shots
                or any((not isinstance(s, int)) or s < 1 for s in shots)):
            raise ConfigError("field 'shots_list' must be a non-empty list of ints >= 1",
                              field="shots_list")
        cfg.shots_list = list(shots)
    if "repeats" in merged:
        if not isinstance(merged["repeats"], int) or merged["repeats"] < 1:
            raise ConfigError("field 'repeats' must be an integer >= 1", field="repeats")
        cfg.repeats = merged["repeats"]
    if "grid" in merged:
        cfg.grid_t, cfg.grid_x = _parse_grid(merged)
    if "ell_grid" in merged:
        grid = merged["ell_grid"]
        if not isinstance(grid, list) or len(grid) < 3 or any(v <= 0 for v in grid):
            raise ConfigError("field 'ell_grid' must list >= 3 positive widths",
                              field="ell_grid")
        cfg.ell_grid = [float(v) * ell for v in sorted(grid)]
    if "base_config" in merged:
        bc = merged["base_config"]
        if not isinstance(bc, dict) or not {"dt", "dr"} <= set(bc):
            raise ConfigError("field 'base_config' needs dt and dr", field="base_config")
        cfg.base_config = (float(bc["dt"]) * ell, float(bc["dr"]) * ell)
    return cfg


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _write_rows(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _field_state(cfg: ScenarioConfig) -> FieldState:
    if cfg.state_tag == "thermal":
        return FieldState.thermal(cfg.beta)
    return FieldState.vacuum()


def _branch_events(cfg: ScenarioConfig, s_over_ell: float,
                   temporal_sign: float = 1.0) -> tuple[Event, Event]:
    """Anchored scan geometry: negative s = temporal branch, positive = spatial."""
    s = abs(s_over_ell) * cfg.ell
    a = cfg.anchor if cfg.anchor is not None else Event(0.0, 0.0, 0.0, 0.0)
    if s_over_ell < 0:
        b = Event(a.t + temporal_sign * s, a.x, a.y, a.z)
    else:
        b = Event(a.t, a.x + s, a.y, a.z)
    return a, b


# ---------------------------------------------------------------------------
# scenario runners
# ---------------------------------------------------------------------------

def _signed_grid(cfg: ScenarioConfig) -> list[float]:
    return [-s for s in reversed(cfg.s_values)] + list(cfg.s_values)


def _run_vacuum_curves(cfg: ScenarioConfig, out: Path) -> list[Path]:
    state = FieldState.vacuum()
    rows = []
    for s in _signed_grid(cfg):
        a, b = _branch_events(cfg, s)
        ri, rj = GaussianRegion(a, cfg.ell), GaussianRegion(b, cfg.ell)
        row: list = [s]
        try:
            row += [hadamard_point(state, a, b),
                    wightman_smeared_closed(state, ri, rj).real,
                    multipole.estimate(state, ri, rj).value, ""]
        except UdwTomoError as exc:
            row = [s, "", "", "", f"{type(exc).__name__}: {exc}"]
        rows.append(row)
    path = out / "vacuum_curves.csv"
    _write_rows(path, ["s_over_ell", "pointlike", "smeared_closed", "multipole", "errors"],
                rows)
    return [path]


def _run_thermal_curves(cfg: ScenarioConfig, out: Path) -> list[Path]:
    vac = FieldState.vacuum()
    th = FieldState.thermal(cfg.beta)
    header = ["s_over_ell", "vacuum_pointlike", "thermal_pointlike",
              "thermal_multipole"]
    if cfg.enable_quadrature_columns:
        header.append("thermal_smeared_quadrature")
    header.append("errors")
    rows = []
    for s in _signed_grid(cfg):
        a, b = _branch_events(cfg, s)
        ri, rj = GaussianRegion(a, cfg.ell), GaussianRegion(b, cfg.ell)
        row: list = [s]
        try:
            row += [hadamard_point(vac, a, b), hadamard_point(th, a, b),
                    multipole.estimate(th, ri, rj).value]
            if cfg.enable_quadrature_columns:
                row.append(wightman_smeared_quadrature(th, ri, rj, cfg.tol).real)
            row.append("")
        except UdwTomoError as exc:
            row = [s] + [""] * (len(header) - 2) + [f"{type(exc).__name__}: {exc}"]
        rows.append(row)
    path = out / "thermal_curves.csv"
    _write_rows(path, header, rows)
    return [path]


def _run_state_curves(cfg: ScenarioConfig, out: Path, tag: str,
                      temporal_sign: float) -> list[Path]:
    vac = FieldState.vacuum()
    state = FieldState(tag, delta=cfg.delta)
    header = ["s_over_ell", "vacuum_pointlike", "state_kernel", "multipole"]
    if cfg.enable_quadrature_columns:
        header.append("smeared_quadrature")
    header.append("errors")
    rows = []
    for s in _signed_grid(cfg):
        a, b = _branch_events(cfg, s, temporal_sign=temporal_sign)
        ri, rj = GaussianRegion(a, cfg.ell), GaussianRegion(b, cfg.ell)
        row: list = [s]
        try:
            row += [hadamard_point(vac, a, b), hadamard_point(state, a, b),
                    multipole.estimate(state, ri, rj).value]
            if cfg.enable_quadrature_columns:
                row.append(wightman_smeared_quadrature(state, ri, rj, cfg.tol).real)
            row.append("")
        except UdwTomoError as exc:
            row = [s] + [""] * (len(header) - 2) + [f"{type(exc).__name__}: {exc}"]
        rows.append(row)
    path = out / f"{cfg.scenario_id}.csv"
    _write_rows(path, header, rows)
    return [path]


def _grid_points(axis: tuple[float, float, int]) -> np.ndarray:
    start, stop, n = axis
    return np.linspace(start, stop, n)


def _run_coherent_field_grid(cfg: ScenarioConfig, out: Path) -> list[Path]:
    rows = []
    for t in _grid_points(cfg.grid_t):
        for x in _grid_points(cfg.grid_x):
            rows.append([float(t), float(x),
                         phi0_coherent(cfg.delta, Event(float(t) * cfg.ell,
                                                        float(x) * cfg.ell, 0.0, 0.0))])
    path = out / "coherent_field_grid.csv"
    _write_rows(path, ["t", "x", "value"], rows)
    return [path]


def _run_oneparticle_diff_grid(cfg: ScenarioConfig, out: Path) -> list[Path]:
    f_anchor = F_oneparticle(cfg.delta, cfg.anchor)
    rows = []
    for t in _grid_points(cfg.grid_t):
        for x in _grid_points(cfg.grid_x):
            f = F_oneparticle(cfg.delta, Event(float(t) * cfg.ell,
                                               float(x) * cfg.ell, 0.0, 0.0))
            rows.append([float(t), float(x), 2.0 * (f_anchor * f.conjugate()).real])
    path = out / "oneparticle_diff_grid.csv"
    _write_rows(path, ["t", "x", "value"], rows)
    return [path]


def _lattice_kernels(cfg: ScenarioConfig):
    events = build_lattice(cfg.lattice)
    regions = [GaussianRegion(e, cfg.ell) for e in events]
    km = assemble_kernels(_field_state(cfg), regions, cfg.lam, tol=cfg.tol,
                          threads=cfg.threads)
    return km


def _run_tomography_roundtrip(cfg: ScenarioConfig, out: Path) -> list[Path]:
    km = _lattice_kernels(cfg)
    results, max_err = [], 0.0
    n_causal = 0
    for i in range(1, km.n + 1):
        for j in range(i + 1, km.n + 1):
            rec = correlation_record(km, i, j)
            res = tomography.reconstruct_record(rec, km.E[i - 1, j - 1])
            results.append(res)
            max_err = max(max_err, abs(res.H_ij_reconstructed - km.H[i - 1, j - 1]))
            n_causal += res.regime == "causal"
    rec_path = out / "reconstruction.csv"
    tomography.write_reconstruction_results(results, rec_path, h_true=km.H)
    sum_path = out / "summary.csv"
    _write_rows(sum_path, ["n_regions", "n_pairs", "n_causal", "n_spacelike",
                           "max_abs_H_error"],
                [[km.n, len(results), n_causal, len(results) - n_causal, max_err]])
    return [rec_path, sum_path]


def _run_convergence_sweep(cfg: ScenarioConfig, out: Path) -> list[Path]:
    state = _field_state(cfg)
    table = multipole.residual_table(state, cfg.base_config, cfg.ell_grid, cfg.tol)
    fit = fit_loglog_slope(table)
    rows = [[ell, resid, fit.slope] for ell, resid in table]
    path = out / "convergence_sweep.csv"
    _write_rows(path, ["ell", "residual", "slope"], rows)
    return [path]


def _run_shot_noise_study(cfg: ScenarioConfig, out: Path) -> list[Path]:
    km = _lattice_kernels(cfg)
    pairs = [(i, j) for i in range(1, km.n + 1) for j in range(i + 1, km.n + 1)]
    rows = []
    for shots in cfg.shots_list:
        sq_errors, n_failed = [], 0
        for rep in range(cfg.repeats):
            seed = int(np.random.SeedSequence(
                entropy=cfg.seed, spawn_key=(shots, rep)).generate_state(1)[0])
            for (i, j) in pairs:
                rec = sample_record(km, i, j, shots, seed)
                try:
                    res = tomography.reconstruct_record(rec, km.E[i - 1, j - 1])
                except UdwTomoError:
                    n_failed += 1
                    continue
                sq_errors.append((res.H_ij_reconstructed - km.H[i - 1, j - 1]) ** 2)
        rms = math.sqrt(sum(sq_errors) / len(sq_errors)) if sq_errors else float("nan")
        rows.append([shots, rms, n_failed])
    path = out / "shot_noise_study.csv"
    _write_rows(path, ["shots", "rms_error", "n_failed"], rows)
    return [path]


_RUNNERS: dict[str, tuple[Callable, str]] = {
    "vacuum_curves": (_run_vacuum_curves,
                      "vacuum two-point curves: pointlike vs smeared vs multipole"),
    "thermal_curves": (_run_thermal_curves,
                       "thermal-state curves at inverse temperature beta"),
    "coherent_curves": (lambda cfg, out: _run_state_curves(cfg, out, "coherent", -1.0),
                        "coherent-state curves scanned from a fixed anchor event"),
    "coherent_field_grid": (_run_coherent_field_grid,
                            "classical source wave on a (t, x) grid"),
    "oneparticle_curves": (lambda cfg, out: _run_state_curves(cfg, out, "one_particle", 1.0),
                           "one-particle wavepacket curves from a fixed anchor event"),
    "oneparticle_diff_grid": (_run_oneparticle_diff_grid,
                              "wavepacket minus vacuum correlation on a (t, x) grid"),
    "tomography_roundtrip": (_run_tomography_roundtrip,
                             "forward-simulate a detector lattice and invert it"),
    "convergence_sweep": (_run_convergence_sweep,
                          "multipole residual vs region width with fitted order"),
    "shot_noise_study": (_run_shot_noise_study,
                         "reconstruction RMS error against measurement shots"),
}


def list_scenarios() -> list[tuple[str, str]]:
    return [(sid, _RUNNERS[sid][1]) for sid in SCENARIO_IDS]


def run(config: dict | ScenarioConfig) -> list[Path]:
    """Validate (if needed) and execute a scenario; returns the written paths."""
    cfg = config if isinstance(config, ScenarioConfig) else validate_config(config)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner, _ = _RUNNERS[cfg.scenario_id]
    return runner(cfg, out)
