"""Numerical geodesic oracle.

Christoffel symbols from any metric field, adaptive integration of the
geodesic equation, and the exponential map along the central worldline.
These never use the closed-form Fermi transforms, so they can check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import RK23, RK45, DOP853, solve_ivp
from scipy.optimize import brentq

from .catalog import (
    CatalogEntry,
    Chart,
    MetricSpec,
    SpacetimePoint,
    Tetrad,
    static_metric_components,
    static_metric_derivative,
    static_spherical_metric_at,
    static_spherical_metric_derivative,
)
from .charts import fermi_metric_components, fermi_metric_derivative

EPS_CBRT = np.finfo(float).eps ** (1.0 / 3.0)
HORIZON_G00 = -1e-10


class SingularMetricError(ArithmeticError):
    pass


class StepSizeUnderflowError(RuntimeError):
    """The integrator could not make progress, usually near a chart boundary."""


class MaxStepsExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class MetricField:
    """A metric as a function of 4 coordinates, with optional exact derivative.

    ``derivative(x)`` returns ``dg[l, i, j] = d g_ij / d x^l``.
    """

    value: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    chart: Chart = Chart.CARTESIAN_STATIC

    def __call__(self, x) -> np.ndarray:
        return self.value(np.asarray(x, dtype=float))


def static_field(spec: MetricSpec) -> MetricField:
    """Static Cartesian metric; no domain checks so integrator stages can probe."""
    return MetricField(lambda x: static_metric_components(spec, x[1:]),
                       lambda x: static_metric_derivative(spec, x[1:]),
                       Chart.CARTESIAN_STATIC)


def fermi_field(spec: MetricSpec) -> MetricField:
    return MetricField(lambda x: fermi_metric_components(spec, x[1:]),
                       lambda x: fermi_metric_derivative(spec, x[1:]),
                       Chart.FERMI_CARTESIAN)


def static_spherical_field(entry: CatalogEntry) -> MetricField:
    return MetricField(lambda x: static_spherical_metric_at(entry, x),
                       lambda x: static_spherical_metric_derivative(entry, x),
                       Chart.STATIC_SPHERICAL)


def minkowski_field() -> MetricField:
    eta = np.diag([-1.0, 1.0, 1.0, 1.0])
    return MetricField(lambda x: eta.copy(), lambda x: np.zeros((4, 4, 4)))


def fd_step(x: np.ndarray) -> np.ndarray:
    return EPS_CBRT * np.maximum(1.0, np.abs(x))


def metric_derivative_fd(field: MetricField, x, h=None) -> np.ndarray:
    """Central-difference dg[l, i, j]; ``h`` is a scalar or per-coordinate steps."""
    x = np.asarray(x, dtype=float)
    steps = fd_step(x) if h is None else np.broadcast_to(np.asarray(h, dtype=float), (4,))
    dg = np.empty((4, 4, 4))
    for l in range(4):
        e = np.zeros(4)
        e[l] = steps[l]
        dg[l] = (field(x + e) - field(x - e)) / (2.0 * steps[l])
    return dg


def christoffel_from(g: np.ndarray, dg: np.ndarray, cond_max: float = 1e12) -> np.ndarray:
    """Gamma[nu, a, b] from the metric and its first derivatives."""
    if not np.all(np.isfinite(g)) or np.linalg.cond(g) > cond_max:
        raise SingularMetricError("metric is singular or badly conditioned")
    ginv = np.linalg.inv(g)
    # lowered[m, a, b] = d_a g_mb + d_b g_ma - d_m g_ab
    lowered = np.transpose(dg, (1, 0, 2)) + np.transpose(dg, (1, 2, 0)) - dg
    gamma = 0.5 * np.einsum("nm,mab->nab", ginv, lowered)
    # exact symmetry in the lower pair, independent of summation order
    return 0.5 * (gamma + np.transpose(gamma, (0, 2, 1)))


def christoffel_at(field: MetricField, p, mode: str = "exact", h=None) -> np.ndarray:
    """Christoffel symbols Gamma^nu_{alpha beta} at ``p``.

    ``mode`` is ``"exact"`` (uses ``field.derivative``) or
    ``"finite_difference"`` (central differences with step ``h``, default
    eps^(1/3) * max(1, |x|)).
    """
    x = p.array if isinstance(p, SpacetimePoint) else np.asarray(p, dtype=float)
    if mode == "exact":
        if field.derivative is None:
            raise ValueError("metric field has no exact derivative")
        dg = field.derivative(x)
    elif mode == "finite_difference":
        if h is not None and np.any(np.asarray(h) <= 0):
            raise ValueError("finite-difference step must be positive")
        dg = metric_derivative_fd(field, x, h)
    else:
        raise ValueError(f"unknown Christoffel mode {mode!r}")
    return christoffel_from(field(x), dg)


# --- integration ------------------------------------------------------------

@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    max_steps: int = 100_000
    method: str = "RK45"

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if not self.max_step > 0 or self.max_steps < 1:
            raise ValueError("max_step must be positive and max_steps >= 1")


@dataclass(frozen=True)
class GeodesicState:
    point: SpacetimePoint
    velocity: tuple[float, float, float, float]

    def norm(self, field: MetricField) -> float:
        v = np.asarray(self.velocity)
        return float(v @ field(self.point.array) @ v)


@dataclass(frozen=True)
class GeodesicPath:
    """Sampled solution; ``status`` is ``"complete"`` or ``"boundary"``."""

    s: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    status: str
    nfev: int

    @property
    def end(self) -> np.ndarray:
        return self.positions[-1]

    def norms(self, field: MetricField) -> np.ndarray:
        return np.array([v @ field(x) @ v for x, v in zip(self.positions, self.velocities)])


_SOLVERS = {"RK23": RK23, "RK45": RK45, "DOP853": DOP853}


def _geodesic_rhs(field: MetricField):
    count = [0]

    def rhs(s, y):
        count[0] += 1
        x, v = y[:4], y[4:]
        gamma = christoffel_at(field, x)
        return np.concatenate((v, -np.einsum("nab,a,b->n", gamma, v, v)))

    return rhs, count


def integrate_geodesic(field: MetricField, state0: GeodesicState, s_end: float,
                       cfg: IntegratorConfig = IntegratorConfig(),
                       samples=None) -> GeodesicPath:
    """Integrate the geodesic equation as 8 first-order ODEs from s = 0 to ``s_end``.

    Integration stops early with status ``"boundary"`` when g_00 rises above
    -1e-10 (located on the step's dense output) or when the metric becomes
    too badly conditioned to invert; both happen at a static-chart horizon.
    ``samples`` selects output parameters; otherwise every accepted step is
    returned. A path that stops early always ends on its last state.

    Raises
    ------
    StepSizeUnderflowError
        If the solver cannot make progress.
    MaxStepsExceededError
        If more than ``cfg.max_steps`` steps are needed.
    """
    if cfg.method not in _SOLVERS:
        raise ValueError(f"unknown integration method {cfg.method!r}")
    y0 = np.concatenate((state0.point.array, np.asarray(state0.velocity, dtype=float)))
    rhs, count = _geodesic_rhs(field)
    solver = _SOLVERS[cfg.method](rhs, 0.0, y0, s_end, rtol=cfg.rtol, atol=cfg.atol,
                                  max_step=cfg.max_step)
    wanted = None if samples is None else np.asarray(samples, dtype=float)
    if wanted is None or np.any(wanted == 0.0):
        s_out, y_out = [0.0], [y0]
    else:
        s_out, y_out = [], []
    status = "complete"

    def g00(y):
        return float(field(y[:4])[0, 0])

    def emit(lo, hi, dense, y_hi):
        if wanted is None:
            s_out.append(hi)
            y_out.append(y_hi)
            return
        for s in wanted[(wanted > lo) & (wanted <= hi)]:
            s_out.append(float(s))
            y_out.append(dense(s))

    steps = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            raise MaxStepsExceededError(f"more than {cfg.max_steps} steps")
        lo = solver.t
        try:
            message = solver.step()
        except SingularMetricError:
            status = "boundary"
            if not s_out or s_out[-1] != solver.t:
                s_out.append(solver.t)
                y_out.append(solver.y)
            break
        steps += 1
        if solver.status == "failed":
            raise StepSizeUnderflowError(message)
        dense = solver.dense_output()
        if g00(solver.y) > HORIZON_G00:
            hit = brentq(lambda s: g00(dense(s)) - HORIZON_G00, lo, solver.t, xtol=1e-14)
            emit(lo, hit, dense, dense(hit))
            if not s_out or s_out[-1] != hit:
                # always end on the boundary point
                s_out.append(hit)
                y_out.append(dense(hit))
            status = "boundary"
            break
        emit(lo, solver.t, dense, solver.y)
    ys = np.array(y_out).reshape(-1, 8)
    return GeodesicPath(np.array(s_out), ys[:, :4].copy(), ys[:, 4:].copy(), status, count[0])


def exponential_map(spec: MetricSpec, tau: float, direction, s: float,
                    cfg: IntegratorConfig = IntegratorConfig()) -> SpacetimePoint:
    """Endpoint of the spacelike geodesic leaving (tau, 0, 0, 0) along direction^j e_j.

    Integrated in the static chart to affine parameter ``s``.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,) or abs(float(d @ d) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit 3-vector")
    origin = SpacetimePoint(Chart.CARTESIAN_STATIC, (tau, 0.0, 0.0, 0.0))
    if s == 0:
        return origin
    velocity = Tetrad.on_worldline().vectors[1:].T @ d
    state0 = GeodesicState(origin, tuple(velocity))
    path = integrate_geodesic(static_field(spec), state0, s, cfg)
    if path.status != "complete":
        raise StepSizeUnderflowError(f"geodesic reached the chart boundary at s = {path.s[-1]!r}")
    return SpacetimePoint(Chart.CARTESIAN_STATIC, tuple(path.end))


def radial_geodesic_residual(spec: MetricSpec, direction, s_max: float, n_samples: int = 50,
                             t: float = 0.0, mode: str = "exact") -> float:
    """Max over samples of |Gamma^nu_ij(t, s a) a^i a^j| in Fermi coordinates.

    Zero means every straight ray (t, s a) is a geodesic of the Fermi metric.
    """
    a = np.asarray(direction, dtype=float)
    field = fermi_field(spec)
    worst = 0.0
    for s in np.linspace(0.0, s_max, n_samples):
        gamma = christoffel_at(field, np.concatenate(([t], s * a)), mode)
        worst = max(worst, float(np.max(np.abs(gamma[:, 1:, 1:] @ a @ a))))
    return worst


def parallel_transport_check(spec: MetricSpec, tau_span=(0.0, 10.0),
                             cfg: IntegratorConfig = IntegratorConfig()) -> float:
    """Transport the worldline tetrad along (tau, 0, 0, 0); return max component drift."""
    field = static_field(spec)
    e0 = Tetrad.on_worldline().vectors
    u = e0[0]

    def rhs(tau, y):
        gamma = christoffel_at(field, np.array([tau, 0.0, 0.0, 0.0]))
        V = y.reshape(4, 4)
        return (-np.einsum("nab,a,kb->kn", gamma, u, V)).ravel()

    sol = solve_ivp(rhs, tuple(tau_span), e0.ravel(), method=cfg.method, rtol=cfg.rtol,
                    atol=cfg.atol, dense_output=False)
    return float(np.max(np.abs(sol.y - e0.ravel()[:, None])))
