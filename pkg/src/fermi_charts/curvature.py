"""Curvature of the (t, rho) slice and separation of radial Fermi geodesics.

With the angles fixed, the Fermi metric restricts to ds^2 = g00(rho) dt^2 + drho^2.
Writing L(rho) = sqrt(-g00), the Gaussian curvature is K = -L''/L and
y = dt * L solves y'' + K y = 0 with y(0) = dt, y'(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .catalog import CatalogEntry, DomainError, MetricSpec, spherical_to_cartesian
from .charts import fermi_metric_components, fermi_rho_limit, in_fermi_domain

_ROOT_XTOL = 1e-10
# ~eps^(1/6): balances roundoff in sqrt(-g00) against stencil truncation
_FD_STEP = 1e-3
_ROOT_SAMPLES = 2048


@dataclass(frozen=True)
class SubmanifoldSlice:
    """The 2-surface of fixed (theta, phi) spanned by Fermi time and distance.

    ``lapse`` and ``curvature`` are optional closed forms for sqrt(-g00) and K
    as functions of rho; without them only the numerical routes are available.
    """

    spec: MetricSpec
    theta: float = math.pi / 2
    phi: float = 0.0
    lapse: Optional[Callable[[float], float]] = field(default=None, repr=False)
    curvature: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        # g00 must depend on rho alone; probe a few rays
        rays = [spherical_to_cartesian(1.0, th, ph)
                for th, ph in ((self.theta, self.phi), (0.3, 1.1), (2.2, 4.0), (1.0, 5.5))]
        for rho in np.linspace(0.0, 0.9, 4) * min(self.rho_limit, 10.0):
            vals = [fermi_metric_components(self.spec, rho * n)[0, 0] for n in rays]
            if max(vals) - min(vals) > 1e-12 * max(1.0, abs(vals[0])):
                raise ValueError("g00 is not a function of rho alone on this spacetime")
        if abs(self.g00(0.0) + 1.0) > 1e-14:
            raise ValueError("g00(0) must be -1")

    @classmethod
    def from_entry(cls, entry: CatalogEntry, theta: float = math.pi / 2, phi: float = 0.0):
        return cls(entry.spec, theta, phi, entry.lapse_fermi, entry.curvature_fermi)

    @property
    def rho_limit(self) -> float:
        return fermi_rho_limit(self.spec, extended=True)[0]

    @property
    def direction(self) -> np.ndarray:
        return spherical_to_cartesian(1.0, self.theta, self.phi)

    def in_domain(self, rho: float) -> bool:
        return in_fermi_domain(self.spec, abs(rho), extended=True)

    def g00(self, rho: float) -> float:
        """g00 at signed distance ``rho`` along the slice's ray (even in rho)."""
        if not self.in_domain(rho):
            raise DomainError(f"outside Fermi chart: rho = {rho!r}")
        return float(fermi_metric_components(self.spec, rho * self.direction)[0, 0])

    def numeric_lapse(self, rho: float) -> float:
        g00 = self.g00(rho)
        if g00 >= 0:
            raise DomainError(f"g00 = {g00!r} >= 0 at rho = {rho!r} (at or beyond a horizon)")
        return math.sqrt(-g00)

    def lapse_at(self, rho: float) -> float:
        if not self.in_domain(rho):
            raise DomainError(f"outside Fermi chart: rho = {rho!r}")
        if self.lapse is not None:
            return self.lapse(rho)
        return self.numeric_lapse(rho)


def gaussian_curvature(slice_: SubmanifoldSlice, rho: float, mode: str = "analytic") -> float:
    """K = -(1/sqrt(-g00)) d^2/drho^2 sqrt(-g00).

    ``mode="analytic"`` uses the slice's closed form; ``"finite_difference"``
    applies a 5-point stencil with step 1e-3 * max(1, rho) to sqrt(-g00)
    computed from the Fermi metric. The step is shrunk near an open chart
    boundary.
    """
    if mode not in ("analytic", "finite_difference"):
        raise ValueError(f"unknown curvature mode {mode!r}")
    if not slice_.in_domain(rho):
        raise DomainError(f"outside Fermi chart: rho = {rho!r}")
    if mode == "analytic":
        if slice_.curvature is None:
            raise ValueError("slice has no closed-form curvature")
        # the closed-form lapse stays accurate where 1 - f rounds to zero
        if slice_.lapse_at(rho) <= 0:
            raise DomainError(f"g00 >= 0 at rho = {rho!r}")
        return float(slice_.curvature(rho))
    if slice_.g00(rho) >= 0:
        raise DomainError(f"g00 >= 0 at rho = {rho!r}")
    h = _FD_STEP * max(1.0, abs(rho))
    limit, closed = fermi_rho_limit(slice_.spec, extended=True)
    if not closed and math.isfinite(limit):
        h = min(h, (limit - abs(rho)) / 3.0)

    def L(r):
        # the stencil may step past a closed boundary (fluid surface); g00 is smooth there
        g00 = float(fermi_metric_components(slice_.spec, r * slice_.direction)[0, 0])
        if g00 >= 0:
            raise DomainError(f"g00 >= 0 at rho = {r!r}")
        return math.sqrt(-g00)

    d2 = (-L(rho + 2 * h) + 16 * L(rho + h) - 30 * L(rho) + 16 * L(rho - h) - L(rho - 2 * h)) / (12 * h * h)
    return float(-d2 / L(rho))


@dataclass(frozen=True)
class JacobiConfig:
    rtol: float = 1e-12
    atol: float = 1e-14
    n_samples: int = _ROOT_SAMPLES + 1
    curvature_mode: str = "analytic"


@dataclass(frozen=True)
class JacobiProfile:
    """Separation y(rho) of the radial geodesics leaving times t and t + delta_t."""

    delta_t: float
    rho: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    K: np.ndarray
    interpolant: Callable = field(repr=False, compare=False)

    def __call__(self, rho):
        return self.interpolant(rho)[0]

    @property
    def rho_max(self) -> float:
        return float(self.rho[-1])


def jacobi_separation(slice_: SubmanifoldSlice, delta_t: float, rho_max: float,
                      cfg: JacobiConfig = JacobiConfig(), samples=None) -> JacobiProfile:
    """Integrate y'' + K(rho) y = 0, y(0) = delta_t, y'(0) = 0 on [0, rho_max]."""
    if not delta_t > 0:
        raise ValueError("delta_t must be positive")
    if not rho_max > 0:
        raise ValueError("rho_max must be positive")
    if not slice_.in_domain(rho_max):
        raise DomainError(f"rho_max = {rho_max!r} beyond the Fermi chart")

    def K(rho):
        return gaussian_curvature(slice_, rho, cfg.curvature_mode)

    def rhs(rho, u):
        return (u[1], -K(rho) * u[0])

    rho = (np.linspace(0.0, rho_max, cfg.n_samples) if samples is None
           else np.asarray(samples, dtype=float))
    sol = solve_ivp(rhs, (0.0, rho_max), (delta_t, 0.0), method="DOP853", rtol=cfg.rtol,
                    atol=cfg.atol * delta_t, dense_output=True)
    if not sol.success:
        raise RuntimeError(f"Jacobi integration failed: {sol.message}")
    y, dy = sol.sol(rho)
    return JacobiProfile(delta_t, rho, y, dy, np.array([K(r) for r in rho]), sol.sol)


def closed_form_separation(slice_: SubmanifoldSlice, delta_t: float, rho) -> np.ndarray:
    return delta_t * np.array([slice_.lapse_at(r) for r in np.atleast_1d(rho)])


def first_positive_root(profile: JacobiProfile) -> Optional[float]:
    """Smallest rho > 0 with y(rho) = 0, located to 1e-10, or None."""
    grid = np.linspace(0.0, profile.rho_max, _ROOT_SAMPLES + 1)
    ys = profile(grid)
    for i in range(1, len(grid)):
        if ys[i] == 0.0:
            return float(grid[i])
        if np.sign(ys[i]) != np.sign(ys[i - 1]):
            lo, hi = grid[i - 1], grid[i]
            ylo = ys[i - 1]
            while hi - lo > _ROOT_XTOL:
                mid = 0.5 * (lo + hi)
                ym = profile(mid)
                if ym == 0.0:
                    return float(mid)
                if np.sign(ym) == np.sign(ylo):
                    lo, ylo = mid, ym
                else:
                    hi = mid
            return float(0.5 * (lo + hi))
    return None


def proper_time_factor(slice_: SubmanifoldSlice, rho0: float) -> float:
    """Proper time per unit Fermi time along the static path at distance ``rho0``.

    Equals sqrt(-g00(rho0)); below 1 where K > 0 (de Sitter: cos(a rho0)) and
    above 1 for anti-de Sitter, where it is the dilation cosh(a rho0).
    """
    if rho0 < 0:
        raise DomainError("rho0 must be non-negative")
    value = slice_.lapse_at(rho0)
    if value <= 0:
        raise DomainError(f"rho0 = {rho0!r} is at or beyond the horizon")
    return value


def horizon_scan(slice_: SubmanifoldSlice, tol: float = 1e-12,
                 search_max: Optional[float] = None, n_grid: int = 4096) -> Optional[float]:
    """Smallest rho where sqrt(-g00) drops below ``tol``, or None.

    Scans the Fermi chart (including its boundary point when finite), then
    refines the first bracket with Brent's method.
    """
    limit = slice_.rho_limit
    if math.isinf(limit):
        a = slice_.spec.a
        limit = search_max if search_max is not None else (20.0 / a if a > 0 else 100.0)
    elif search_max is not None:
        limit = min(limit, search_max)

    def lapse(rho):
        if slice_.lapse is not None:
            return slice_.lapse(rho)
        g00 = float(fermi_metric_components(slice_.spec, rho * slice_.direction)[0, 0])
        return math.sqrt(max(-g00, 0.0))

    grid = np.linspace(0.0, limit, n_grid + 1)
    if lapse(grid[0]) < tol:
        return 0.0
    for lo, hi in zip(grid[:-1], grid[1:]):
        if lapse(hi) < tol:
            return float(brentq(lambda r: lapse(r) - tol, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return None
