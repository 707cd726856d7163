"""``fermi-charts`` command-line interface.

Usage::

    fermi-charts <transform|metric|curvature|jacobi|horizon|validate> --config run.json
                 [--format csv|json] [--out FILE] [--seed N]

Exit codes: 0 success, 1 a check failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .catalog import CatalogEntry, Chart, DomainError, entry_from_config, metric_at, static_spherical_metric_at
from .charts import (
    cartesian_to_fermi,
    fermi_metric_at,
    fermi_polar_metric_at,
    fermi_rho_limit,
    fermi_to_cartesian,
)
from .curvature import (
    SubmanifoldSlice,
    closed_form_separation,
    gaussian_curvature,
    horizon_scan,
    jacobi_separation,
)
from .validation import DEFAULT_SAMPLES, DEFAULT_TOLERANCES, curvature_grid, sampling_reach, validate

COMMANDS = ("transform", "metric", "curvature", "jacobi", "horizon", "validate")
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

_TOP_KEYS = {"spacetime", "points", "direction", "chart", "grid", "delta_t",
             "horizon_tol", "search_max", "samples", "tolerances", "seed"}
_GRID_KEYS = {"start", "stop", "count"}
_CLI_TOLERANCES = {"curvature": 1e-6, "jacobi": 1e-8}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Parsed ``--config`` file; see the README for the schema."""

    spacetime: dict
    entry: CatalogEntry
    points: list = field(default_factory=list)
    direction: str = "from-fermi"
    chart: str = Chart.CARTESIAN_STATIC.value
    grid: Optional[dict] = None
    delta_t: float = 1.0
    horizon_tol: float = 1e-12
    search_max: Optional[float] = None
    samples: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0

    def tolerance(self, name: str) -> float:
        return self.tolerances.get(name, _CLI_TOLERANCES.get(name, DEFAULT_TOLERANCES.get(name)))


def _number(value, name, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise UsageError(f"{name} must be a finite number")
    if positive and value <= 0:
        raise UsageError(f"{name} must be positive")
    return float(value)


def parse_config(raw: Any) -> RunConfig:
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if "spacetime" not in raw:
        raise UsageError("config needs a 'spacetime' object")
    try:
        entry = entry_from_config(raw["spacetime"])
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg = RunConfig(spacetime=dict(raw["spacetime"]), entry=entry)

    if "points" in raw:
        pts = raw["points"]
        if not isinstance(pts, list) or not all(isinstance(p, list) and len(p) == 4 for p in pts):
            raise UsageError("points must be a list of 4-element lists")
        cfg.points = [[_number(v, "point coordinate") for v in p] for p in pts]
    if "direction" in raw:
        if raw["direction"] not in ("from-fermi", "to-fermi"):
            raise UsageError("direction must be 'from-fermi' or 'to-fermi'")
        cfg.direction = raw["direction"]
    if "chart" in raw:
        try:
            cfg.chart = Chart(raw["chart"]).value
        except ValueError:
            raise UsageError(f"unknown chart {raw['chart']!r}") from None
    if "grid" in raw:
        grid = raw["grid"]
        if not isinstance(grid, dict) or set(grid) - _GRID_KEYS:
            raise UsageError(f"grid must be an object with keys {sorted(_GRID_KEYS)}")
        count = grid.get("count", 16)
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise UsageError("grid count must be an integer >= 1")
        cfg.grid = {"start": _number(grid.get("start", 0.0), "grid start"),
                    "stop": None if "stop" not in grid else _number(grid["stop"], "grid stop"),
                    "count": count}
    if "delta_t" in raw:
        cfg.delta_t = _number(raw["delta_t"], "delta_t", positive=True)
    if "horizon_tol" in raw:
        cfg.horizon_tol = _number(raw["horizon_tol"], "horizon_tol", positive=True)
    if raw.get("search_max") is not None:
        cfg.search_max = _number(raw["search_max"], "search_max", positive=True)
    for key, allowed in (("samples", DEFAULT_SAMPLES), ("tolerances", {**DEFAULT_TOLERANCES, **_CLI_TOLERANCES})):
        if key in raw:
            block = raw[key]
            if not isinstance(block, dict) or set(block) - set(allowed):
                raise UsageError(f"{key} keys must be among {sorted(allowed)}")
            if key == "samples":
                for name, v in block.items():
                    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                        raise UsageError(f"samples.{name} must be an integer >= 1")
                cfg.samples = dict(block)
            else:
                cfg.tolerances = {name: _number(v, f"tolerances.{name}", positive=True)
                                  for name, v in block.items()}
    if "seed" in raw:
        seed = raw["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        cfg.seed = seed
    return cfg


def rho_grid(cfg: RunConfig) -> np.ndarray:
    """Inclusive grid over the Fermi distance; an open chart boundary is pulled inward."""
    limit, closed = fermi_rho_limit(cfg.entry.spec, extended=True)
    grid = cfg.grid or {"start": 0.0, "stop": None, "count": 16}
    start = grid["start"]
    stop = grid["stop"]
    if stop is None:
        stop = limit if math.isfinite(limit) else sampling_reach(cfg.entry)
    if start < 0 or stop < start:
        raise UsageError("grid needs 0 <= start <= stop")
    span = stop - start
    if math.isfinite(limit) and not closed and stop == limit:
        stop -= 1e-9 * (span if span > 0 else 1.0)
    if stop > limit or (stop == limit and not closed):
        raise DomainError(f"outside Fermi chart: grid stop {stop!r} beyond rho limit {limit!r}")
    return np.linspace(start, stop, grid["count"])


# --- commands ---------------------------------------------------------------

@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    extra: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK


def _rel_err(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def cmd_transform(cfg: RunConfig) -> Table:
    spec = cfg.entry.spec
    if not cfg.points:
        raise UsageError("transform needs 'points'")
    if cfg.direction == "from-fermi":
        names = ["x0", "x1", "x2", "x3", "t", "x", "y", "z"]
        forward, backward = fermi_to_cartesian, cartesian_to_fermi
    else:
        names = ["t", "x", "y", "z", "x0", "x1", "x2", "x3"]
        forward, backward = cartesian_to_fermi, fermi_to_cartesian
    rows = []
    for p in cfg.points:
        try:
            out = forward(spec, p).array
        except DomainError as exc:
            raise DomainError(f"point {p}: {exc}") from None
        back = backward(spec, out).array
        rows.append([*p, *out.tolist(), _rel_err(back, p)])
    return Table(names + ["roundtrip_err"], rows, {"direction": cfg.direction})


_UPPER = [(i, j) for i in range(4) for j in range(i, 4)]


def cmd_metric(cfg: RunConfig) -> Table:
    if not cfg.points:
        raise UsageError("metric needs 'points'")
    chart = Chart(cfg.chart)
    evaluate = {
        Chart.CARTESIAN_STATIC: lambda p: metric_at(cfg.entry.spec, p),
        Chart.FERMI_CARTESIAN: lambda p: fermi_metric_at(cfg.entry.spec, p),
        Chart.FERMI_POLAR: lambda p: fermi_polar_metric_at(cfg.entry.spec, p),
        Chart.STATIC_SPHERICAL: lambda p: static_spherical_metric_at(cfg.entry, p),
    }[chart]
    rows = []
    for p in cfg.points:
        try:
            g = evaluate(p)
        except DomainError as exc:
            raise DomainError(f"point {p}: {exc}") from None
        rows.append([*p, *(float(g[i, j]) for i, j in _UPPER)])
    return Table(["c0", "c1", "c2", "c3"] + [f"g{i}{j}" for i, j in _UPPER], rows,
                 {"chart": chart.value})


def cmd_curvature(cfg: RunConfig) -> Table:
    slice_ = SubmanifoldSlice.from_entry(cfg.entry)
    tol = cfg.tolerance("curvature")
    rows, worst = [], 0.0
    # by default stay clear of an open boundary, where the stencil loses all precision
    grid = rho_grid(cfg) if cfg.grid else curvature_grid(cfg.entry, 16)
    for rho in grid:
        k_a = gaussian_curvature(slice_, rho)
        k_fd = gaussian_curvature(slice_, rho, "finite_difference")
        worst = max(worst, abs(k_a - k_fd))
        rows.append([float(rho), k_a, k_fd, abs(k_a - k_fd)])
    code = EXIT_OK if worst < tol else EXIT_FAILED
    return Table(["rho", "K_analytic", "K_fd", "abs_diff"], rows,
                 {"tolerance": tol, "max_abs_diff": worst}, code)


def cmd_jacobi(cfg: RunConfig) -> Table:
    slice_ = SubmanifoldSlice.from_entry(cfg.entry)
    grid = rho_grid(cfg)
    tol = cfg.tolerance("jacobi")
    rho_max = float(grid[-1])
    if rho_max > 0:
        profile = jacobi_separation(slice_, cfg.delta_t, rho_max, samples=grid)
        ys = profile.y
    else:
        ys = np.full(len(grid), cfg.delta_t)
    closed = closed_form_separation(slice_, cfg.delta_t, grid)
    diffs = np.abs(ys - closed)
    rows = [[float(r), float(y), float(c), float(d)] for r, y, c, d in zip(grid, ys, closed, diffs)]
    worst = float(diffs.max())
    code = EXIT_OK if worst < tol * cfg.delta_t else EXIT_FAILED
    return Table(["rho", "y", "y_closed_form", "abs_diff"], rows,
                 {"delta_t": cfg.delta_t, "tolerance": tol, "max_abs_diff": worst}, code)


def cmd_horizon(cfg: RunConfig) -> Table:
    slice_ = SubmanifoldSlice.from_entry(cfg.entry)
    rho_h = horizon_scan(slice_, cfg.horizon_tol, cfg.search_max)
    return Table(["rho_h"], [[rho_h]], {"tol": cfg.horizon_tol})


def cmd_validate(cfg: RunConfig) -> Table:
    tolerances = {k: v for k, v in cfg.tolerances.items() if k in DEFAULT_TOLERANCES}
    report = validate(cfg.entry, cfg.seed, tolerances, cfg.samples)
    rows = [[c.name, c.passed, c.max_error, c.tolerance, c.samples] for c in report.checks]
    return Table(["check", "passed", "max_error", "tolerance", "samples"], rows,
                 {"seed": cfg.seed, "passed": report.passed},
                 EXIT_OK if report.passed else EXIT_FAILED)


_HANDLERS = {"transform": cmd_transform, "metric": cmd_metric, "curvature": cmd_curvature,
             "jacobi": cmd_jacobi, "horizon": cmd_horizon, "validate": cmd_validate}


# --- output -----------------------------------------------------------------

def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(command: str, cfg: RunConfig, table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {"command": command, "spacetime": cfg.spacetime, **table.extra,
               "columns": table.columns, "rows": table.rows}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fermi-charts",
                                     description="Exact Fermi coordinate charts and their numerical checks.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--seed", type=int, help="random seed (overrides the config)")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
        cfg = parse_config(raw)
        if args.seed is not None:
            if not 0 <= args.seed < 2 ** 64:
                raise UsageError("seed must be an unsigned 64-bit integer")
            cfg.seed = args.seed
        table = _HANDLERS[args.command](cfg)
    except (OSError, json.JSONDecodeError, UsageError, DomainError) as exc:
        print(f"fermi-charts: error: {exc}", file=stderr)
        return EXIT_USAGE
    text = render(args.command, cfg, table, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return table.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
