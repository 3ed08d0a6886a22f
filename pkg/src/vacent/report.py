"""Tabular datasets: config-driven runs, sweeps and the figure presets."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import RunConfig
from .scenarios import (
    AcceleratedSpec,
    InertialSpec,
    SweepAxis,
    accelerated_single_excitations,
    closed_form_excitations,
    run,
    run_accelerated,
    run_inertial,
    simulated_excitations,
    sweep,
    unruh_response,
)

FIGURES = ("fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b")

# (omega, lambda) sets used for the delay curves
FIG2C_SETS = ((2.3, 1.2), (4.6, 1.9), (4.6, 1.4))
# second-detector delays: three switching times (3t at t = 1) and 4
FIG3B_DELAYS = (3.0, 4.0)
HEATMAP_OMEGA = (0.5, 10.0)
HEATMAP_LAMBDA = (0.0, 5.0)


@dataclass
class Dataset:
    columns: list[str]
    rows: list[list]
    meta: list[str]

    def column(self, name: str) -> np.ndarray:
        k = self.columns.index(name)
        return np.array([row[k] for row in self.rows], dtype=float)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def to_csv(data: Dataset) -> str:
    buf = io.StringIO()
    buf.write(f"# vacent {__version__}\n")
    for line in data.meta:
        buf.write(f"# {line}\n")
    buf.write(",".join(data.columns) + "\n")
    for row in data.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _config_meta(config: RunConfig) -> list[str]:
    return [f"config: {line}" for line in config.to_text().splitlines()]


def _stability_meta(stable) -> str:
    n_bad = int(np.size(stable) - np.count_nonzero(stable))
    return f"unstable points: {n_bad}" + (" (coupling beyond the stable regime)" if n_bad else "")


# config-driven runs


def _pair_dataset(config: RunConfig, workers: int) -> Dataset:
    base = config.spec()
    swept = [ax.param for ax in config.sweeps]
    fixed = {k: v for k, v in _effective_params(base).items() if k not in swept}
    columns = swept + list(fixed) + [
        "negativity",
        "log_negativity",
        "nu_tilde_minus",
        "excitations_1",
        "excitations_2",
        "stable",
    ]
    if config.sweeps:
        table = sweep(base, config.sweeps, workers)
        results = [
            (table.grid[k], table.negativity[k], table.log_negativity[k], table.nu_tilde_minus[k],
             table.excitations[k], table.stable[k])
            for k in range(len(table))
        ]
    else:
        res = run(base)
        ent = res.entanglement
        results = [((), ent.negativity, ent.log_negativity, ent.nu_tilde_minus, res.excitations,
                    res.stable)]
    rows = [
        [*grid, *fixed.values(), neg, logneg, nu, exc[0], exc[1], bool(ok)]
        for grid, neg, logneg, nu, exc, ok in results
    ]
    meta = _config_meta(config) + [_stability_meta(np.array([r[-1] for r in results]))]
    return Dataset(columns, rows, meta)


def _effective_params(spec) -> dict[str, float]:
    if isinstance(spec, InertialSpec):
        out = {"omega": spec.omega, "lambda": spec.lam, "t": spec.t, "separation": spec.separation}
        if spec.scenario == "d":
            out["T"] = spec.T
        return out
    out = {"omega": spec.omega, "lambda": spec.lam, "t": spec.t, "r": spec.squeezing}
    if spec.delay is not None:
        out["delay"] = spec.delay
    if spec.Omega is not None:
        out["Omega"], out["a"] = spec.Omega, spec.a
    return out


def _grid(config: RunConfig) -> list[dict[str, float]]:
    base = dict(config.params)
    if not config.sweeps:
        return [base]
    values = [ax.values() for ax in config.sweeps]
    points = []
    for combo in np.array(np.meshgrid(*values, indexing="ij")).reshape(len(values), -1).T:
        p = dict(base)
        p.update({ax.param: float(v) for ax, v in zip(config.sweeps, combo)})
        points.append(p)
    return points


def _single_detector_dataset(config: RunConfig) -> Dataset:
    columns = ["omega", "lambda", "t", "N_simulated", "N_closed_form", "deviation"]
    rows = []
    for p in _grid(config):
        sim = simulated_excitations(p["omega"], p["lambda"], p["t"])
        closed = closed_form_excitations(p["omega"], p["lambda"], p["t"])
        rows.append([p["omega"], p["lambda"], p["t"], sim, closed, abs(sim - closed)])
    return Dataset(columns, rows, _config_meta(config))


def _unruh_dataset(config: RunConfig) -> Dataset:
    columns = ["omega", "lambda", "t", "r", "N_r", "N", "R", "fit_residual"]
    rows = []
    for p in _grid(config):
        r = p.get("r", 1.0)
        resp = unruh_response(p["omega"], p["lambda"], p["t"])
        n_r = accelerated_single_excitations(p["omega"], p["lambda"], p["t"], r)
        rows.append([p["omega"], p["lambda"], p["t"], r, n_r, resp.N, resp.R, resp.max_residual])
    return Dataset(columns, rows, _config_meta(config))


def dataset_for(config: RunConfig, workers: int = 1) -> Dataset:
    if config.scenario == "single-detector":
        return _single_detector_dataset(config)
    if config.scenario == "unruh-response":
        return _unruh_dataset(config)
    return _pair_dataset(config, workers)


# figure presets


def _curves(x_name, x_values, specs: dict[str, object], param: str, extra_meta) -> Dataset:
    tables = {
        key: sweep(spec, [SweepAxis(param, x_values[0], x_values[-1], len(x_values))])
        for key, spec in specs.items()
    }
    columns = [x_name]
    columns += [f"negativity_{k}" for k in specs]
    columns += [f"log_negativity_{k}" for k in specs]
    columns += [f"stable_{k}" for k in specs]
    rows = []
    for i, x in enumerate(x_values):
        row = [x]
        row += [tables[k].negativity[i] for k in specs]
        row += [tables[k].log_negativity[i] for k in specs]
        row += [bool(tables[k].stable[i]) for k in specs]
        rows.append(row)
    stable = np.concatenate([t.stable for t in tables.values()])
    return Dataset(columns, rows, extra_meta + [_stability_meta(stable)])


def _separation_figure(fig, omega, lam, steps, paper_positions) -> Dataset:
    period = 2 * math.pi / omega
    xs = np.linspace(0.0, 2 * period, steps)
    specs = {
        s: InertialSpec(s, omega, lam, 1.0, 0.0, paper_positions=paper_positions) for s in "abc"
    }
    x_name = "x" if paper_positions else "separation"
    layout = "detectors at +-x" if paper_positions else "detectors at +-separation/2"
    meta = [
        f"figure: {fig}",
        f"omega = {omega!r}, lambda = {lam!r}, t = 1.0",
        f"positions: {layout}",
        f"steps = {steps}",
    ]
    return _curves(x_name, xs, specs, "separation", meta)


def _fig2c(steps) -> Dataset:
    Ts = np.linspace(0.0, 2 * 2 * math.pi / min(w for w, _ in FIG2C_SETS), steps)
    specs = {f"omega{w}_lambda{l}": InertialSpec("d", w, l, 1.0, 0.0, 0.0) for w, l in FIG2C_SETS}
    meta = [
        "figure: fig2c",
        "scenario d, t = 1.0, separation = 0, sets (omega, lambda) = "
        + "; ".join(f"({w!r}, {l!r})" for w, l in FIG2C_SETS),
        f"steps = {steps}",
    ]
    return _curves("T", Ts, specs, "T", meta)


def _heatmap(fig, steps, evaluate, value_names, meta) -> Dataset:
    omegas = np.linspace(*HEATMAP_OMEGA, steps)
    lams = np.linspace(*HEATMAP_LAMBDA, steps)
    rows = []
    stable = []
    for w in omegas:
        for l in lams:
            extra, values, ok = evaluate(w, l)
            rows.append([w, l, *extra, *values, ok])
            stable.append(ok)
    columns = ["omega", "lambda", *value_names, "stable"]
    meta = [f"figure: {fig}", *meta, f"steps = {steps}", _stability_meta(np.array(stable))]
    return Dataset(columns, rows, meta)


def _fig2d(steps, paper_positions) -> Dataset:
    def evaluate(w, l):
        x = math.pi / (2 * w)
        res = run_inertial(InertialSpec("a", w, l, 1.0, x, paper_positions=paper_positions))
        return [x], [res.negativity, res.log_negativity], res.stable

    x_name = "x" if paper_positions else "separation"
    layout = "detectors at +-x" if paper_positions else "detectors at +-separation/2"
    meta = ["scenario a, t = 1.0, separation pi/(2 omega)", f"positions: {layout}"]
    return _heatmap("fig2d", steps, evaluate, [x_name, "negativity", "log_negativity"], meta)


def _fig3(fig, steps, r) -> Dataset:
    delays = (None,) if fig == "fig3a" else FIG3B_DELAYS

    def evaluate(w, l):
        neg, logneg, ok = [], [], True
        for d in delays:
            res = run_accelerated(AcceleratedSpec(w, l, 1.0, r=r, delay=d))
            neg.append(res.negativity)
            logneg.append(res.log_negativity)
            ok = ok and res.stable
        return [], neg + logneg, ok

    if fig == "fig3a":
        names = ["negativity", "log_negativity"]
        what = "simultaneous switching"
    else:
        names = [f"negativity_delay{d:g}" for d in delays] + [
            f"log_negativity_delay{d:g}" for d in delays
        ]
        what = "delayed second detector, delays " + ", ".join(f"{d:g}" for d in delays)
    meta = [f"accelerated pair, r = {r!r}, t = 1.0 (Rindler time), {what}"]
    return _heatmap(fig, steps, evaluate, names, meta)


def figure_dataset(
    fig: str, steps: int | None = None, paper_positions: bool = False, r: float | None = None
) -> Dataset:
    """Dataset behind one of the figure presets in :data:`FIGURES`."""
    if fig not in FIGURES:
        raise KeyError(f"unknown figure {fig!r}; choose from {', '.join(FIGURES)}")
    if r is not None and not fig.startswith("fig3"):
        raise ValueError("--r only applies to fig3a and fig3b")
    if steps is not None and steps < 2:
        raise ValueError("steps must be >= 2")
    if fig == "fig2a":
        return _separation_figure(fig, 4.6, 1.5, steps or 200, paper_positions)
    if fig == "fig2b":
        return _separation_figure(fig, 2.0, 4.8, steps or 200, paper_positions)
    if fig == "fig2c":
        return _fig2c(steps or 200)
    if fig == "fig2d":
        return _fig2d(steps or 41, paper_positions)
    return _fig3(fig, steps or 41, 1.0 if r is None else r)
