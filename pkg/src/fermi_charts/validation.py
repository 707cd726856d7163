"""Randomized cross-checks of the closed-form charts against the numerical oracle."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .catalog import ETA, CatalogEntry, metric_at
from .charts import (
    cartesian_to_fermi,
    fermi_metric_at,
    fermi_polar_metric_at,
    fermi_rho_limit,
    fermi_to_cartesian,
    polar_jacobian,
    polar_to_fermi_cartesian,
    transform_jacobian,
)
from .curvature import (
    SubmanifoldSlice,
    closed_form_separation,
    first_positive_root,
    gaussian_curvature,
    jacobi_separation,
)
from .geodesics import (
    christoffel_at,
    exponential_map,
    fermi_field,
    parallel_transport_check,
    radial_geodesic_residual,
    static_field,
)

DEFAULT_TOLERANCES = {
    "round_trip": 1e-12,
    "isometry": 1e-10,
    "polar_form": 1e-12,
    "worldline": 1e-8,
    "radial_geodesic": 1e-8,
    "exponential_map": 1e-7,
    "parallel_transport": 1e-10,
    "curvature": 1e-6,
    "jacobi": 1e-8,
}

DEFAULT_SAMPLES = {
    "round_trip": 1000,
    "isometry": 200,
    "polar_form": 200,
    "worldline": 20,
    "radial_geodesic": 20,
    "exponential_map": 100,
    "curvature": 50,
}

# cap for sampling unbounded charts, in units of 1/a (or length when k = 0)
_UNBOUNDED_REACH = 2.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    samples: int


@dataclass
class ValidationReport:
    spacetime: str
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"spacetime": self.spacetime, "seed": self.seed, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}


def sampling_reach(entry: CatalogEntry, extended: bool = False) -> float:
    """Largest Fermi radius used for random sampling."""
    limit, _ = fermi_rho_limit(entry.spec, extended)
    if math.isinf(limit):
        a = entry.spec.a
        return _UNBOUNDED_REACH / a if a > 0 else _UNBOUNDED_REACH
    return limit


def random_direction(rng: np.random.Generator) -> np.ndarray:
    d = rng.normal(size=3)
    return d / np.linalg.norm(d)


def random_fermi_point(entry: CatalogEntry, rng: np.random.Generator, fraction: float = 0.99,
                       extended: bool = False) -> np.ndarray:
    rho = fraction * sampling_reach(entry, extended) * rng.uniform()
    return np.concatenate(([rng.uniform(-10.0, 10.0)], rho * random_direction(rng)))


def check_round_trip(entry, rng, n):
    worst = 0.0
    for _ in range(n):
        x = random_fermi_point(entry, rng)
        back = cartesian_to_fermi(entry.spec, fermi_to_cartesian(entry.spec, x)).array
        worst = max(worst, float(np.max(np.abs(back - x) / np.maximum(1.0, np.abs(x)))))
    return worst


def check_isometry(entry, rng, n):
    worst = 0.0
    for _ in range(n):
        x = random_fermi_point(entry, rng)
        J = transform_jacobian(entry.spec, x)
        pulled = J.T @ metric_at(entry.spec, fermi_to_cartesian(entry.spec, x)) @ J
        worst = max(worst, float(np.max(np.abs(pulled - fermi_metric_at(entry.spec, x)))))
    return worst


def check_polar_form(entry, rng, n):
    worst = 0.0
    for _ in range(n):
        rho = 0.99 * sampling_reach(entry, extended=True) * rng.uniform()
        fp = (rng.uniform(-10, 10), rho, rng.uniform(0.01, math.pi - 0.01), rng.uniform(0, 2 * math.pi))
        P = polar_jacobian(fp)
        pulled = P.T @ fermi_metric_at(entry.spec, polar_to_fermi_cartesian(fp)) @ P
        worst = max(worst, float(np.max(np.abs(pulled - fermi_polar_metric_at(entry.spec, fp)))))
    return worst


def check_worldline(entry, rng, n):
    """Fermi metric equals eta and finite-difference Christoffels vanish on the worldline."""
    worst = 0.0
    fields = (static_field(entry.spec), fermi_field(entry.spec))
    for t in rng.uniform(-10.0, 10.0, n):
        p = np.array([t, 0.0, 0.0, 0.0])
        worst = max(worst, float(np.max(np.abs(fermi_metric_at(entry.spec, p) - ETA))))
        for fld in fields:
            worst = max(worst, float(np.max(np.abs(christoffel_at(fld, p, "finite_difference")))))
    return worst


def check_radial_geodesic(entry, rng, n, n_points=50):
    reach = 0.99 * sampling_reach(entry)
    return max(radial_geodesic_residual(entry.spec, random_direction(rng), reach, n_points,
                                        t=rng.uniform(-10, 10))
               for _ in range(n))


def check_exponential_map(entry, rng, n):
    worst = 0.0
    reach = 0.95 * sampling_reach(entry)
    for _ in range(n):
        d = random_direction(rng)
        s = reach * rng.uniform()
        tau = rng.uniform(-10.0, 10.0)
        numeric = exponential_map(entry.spec, tau, d, s).array
        closed = fermi_to_cartesian(entry.spec, np.concatenate(([tau], s * d))).array
        worst = max(worst, float(np.max(np.abs(numeric - closed))))
    return worst


def curvature_grid(entry: CatalogEntry, n: int) -> np.ndarray:
    """Interior sample radii for curvature cross-checks (extended chart)."""
    limit, closed = fermi_rho_limit(entry.spec, extended=True)
    if math.isinf(limit):
        return np.linspace(0.0, sampling_reach(entry), n)
    return np.linspace(0.0, limit if closed else 0.95 * limit, n)


def check_curvature(entry, n):
    slice_ = SubmanifoldSlice.from_entry(entry)
    return max(abs(gaussian_curvature(slice_, r) - gaussian_curvature(slice_, r, "finite_difference"))
               for r in curvature_grid(entry, n))


def jacobi_reach(entry: CatalogEntry) -> float:
    limit, closed = fermi_rho_limit(entry.spec, extended=True)
    if math.isinf(limit):
        return sampling_reach(entry)
    return limit if closed else limit * (1.0 - 1e-6)


def check_jacobi(entry, delta_t=1.0):
    slice_ = SubmanifoldSlice.from_entry(entry)
    profile = jacobi_separation(slice_, delta_t, jacobi_reach(entry))
    err = float(np.max(np.abs(profile.y - closed_form_separation(slice_, delta_t, profile.rho))))
    return err / delta_t, profile


def validate(entry: CatalogEntry, seed: int = 0, tolerances=None, samples=None) -> ValidationReport:
    """Run every cross-check for ``entry``; deterministic for a given seed."""
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    n = {**DEFAULT_SAMPLES, **(samples or {})}
    report = ValidationReport(entry.kind.value, seed)
    rng = np.random.default_rng(seed)

    def record(name, err, count):
        report.checks.append(CheckResult(name, bool(err < tol[name]), float(err), tol[name], count))

    record("round_trip", check_round_trip(entry, rng, n["round_trip"]), n["round_trip"])
    record("isometry", check_isometry(entry, rng, n["isometry"]), n["isometry"])
    record("polar_form", check_polar_form(entry, rng, n["polar_form"]), n["polar_form"])
    record("worldline", check_worldline(entry, rng, n["worldline"]), n["worldline"])
    record("radial_geodesic", check_radial_geodesic(entry, rng, n["radial_geodesic"]),
           n["radial_geodesic"])
    record("exponential_map", check_exponential_map(entry, rng, n["exponential_map"]),
           n["exponential_map"])
    record("parallel_transport", parallel_transport_check(entry.spec, (0.0, 10.0)), 1)
    record("curvature", check_curvature(entry, n["curvature"]), n["curvature"])
    jacobi_err, profile = check_jacobi(entry)
    record("jacobi", jacobi_err, len(profile.rho))
    # with K <= 0 the separation can have no positive root
    if max(profile.K) <= 0:
        root = first_positive_root(profile)
        report.checks.append(CheckResult("no_positive_root", root is None,
                                         0.0 if root is None else float(root), 0.0, 1))
    return report
