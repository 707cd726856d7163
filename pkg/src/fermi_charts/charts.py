"""Closed-form maps between Fermi coordinates and the static chart.

Fermi coordinates (x0, x1, x2, x3) along the central worldline (t, 0, 0, 0)
relate to the static Cartesian chart by

    t = x0,   x^i_static = x^i * S(k rho^2),

where S is sin(a rho)/(a rho) for k > 0, sinh(a rho)/(a rho) for k < 0 and 1
for k = 0. The map depends only on k, not on f.
"""

from __future__ import annotations

import math

import numpy as np

from ._series import arcsinc_z, defect_z, defect_z_deriv, sinc_z, sinc_z_deriv
from .catalog import (
    ETA,
    Chart,
    DomainError,
    MetricSpec,
    SpacetimePoint,
    coords_of,
    spherical_to_cartesian,
    spherical_to_cartesian_jacobian,
)


def fermi_rho_limit(spec: MetricSpec, extended: bool = False) -> tuple[float, bool]:
    """Outer Fermi radius of the chart as ``(limit, closed)``.

    ``extended`` enables the larger rho < pi/a range for specs that allow it;
    it is ignored otherwise.
    """
    k = spec.k
    if k > 0:
        a = spec.a
        if extended and spec.extended_fermi:
            return math.pi / a, False
        if spec.r_limit * a < 1.0:
            return spec.r_limit * arcsinc_z(k * spec.r_limit ** 2), spec.r_closed
        return math.pi / (2.0 * a), False
    if math.isinf(spec.r_limit):
        return math.inf, False
    return spec.r_limit * arcsinc_z(k * spec.r_limit ** 2), spec.r_closed


def in_fermi_domain(spec: MetricSpec, rho: float, extended: bool = False) -> bool:
    limit, closed = fermi_rho_limit(spec, extended)
    return 0.0 <= rho < limit or (closed and rho == limit)


def _check_rho(spec: MetricSpec, rho: float, extended: bool = False) -> None:
    if not in_fermi_domain(spec, rho, extended):
        limit, _ = fermi_rho_limit(spec, extended)
        raise DomainError(f"outside Fermi chart: rho = {rho!r} (limit {limit!r})")


def scaled_profile(k: float, rho: float) -> float:
    """sin(rho a)/(rho a), sinh(rho a)/(rho a) or 1 according to the sign of k."""
    if rho < 0:
        raise DomainError("rho must be non-negative")
    if k > 0 and rho * math.sqrt(k) >= math.pi:
        raise DomainError("rho a >= pi")
    return sinc_z(k * rho * rho)


def r_of_rho(k: float, rho: float) -> float:
    """Static areal radius at Fermi distance ``rho`` (sin(a rho)/a for k > 0)."""
    if rho < 0:
        raise DomainError("rho must be non-negative")
    if k > 0 and rho * math.sqrt(k) > math.pi / 2:
        raise DomainError(f"rho = {rho!r} beyond pi/(2a)")
    return rho * sinc_z(k * rho * rho)


def rho_of_r(k: float, r: float) -> float:
    """Fermi distance of static radius ``r`` (arcsin(r a)/a for k > 0)."""
    if r < 0:
        raise DomainError("r must be non-negative")
    z = k * r * r
    if z > 1.0:
        raise DomainError(f"r = {r!r} beyond 1/a")
    if z == 1.0:
        return math.pi / (2.0 * math.sqrt(k))
    return r * arcsinc_z(z)


def fermi_to_cartesian(spec: MetricSpec, fp) -> SpacetimePoint:
    x = coords_of(fp, Chart.FERMI_CARTESIAN)
    xs = x[1:]
    rho2 = float(xs @ xs)
    _check_rho(spec, math.sqrt(rho2))
    out = np.concatenate(([x[0]], xs * sinc_z(spec.k * rho2)))
    spec.check_spatial(out[1:])
    return SpacetimePoint(Chart.CARTESIAN_STATIC, tuple(out))


def cartesian_to_fermi(spec: MetricSpec, p) -> SpacetimePoint:
    c = coords_of(p, Chart.CARTESIAN_STATIC)
    xyz = c[1:]
    r2 = float(xyz @ xyz)
    spec.check_spatial(xyz)
    z = spec.k * r2
    if z >= 1.0:
        raise DomainError(f"outside Fermi chart: r = {math.sqrt(r2)!r} >= 1/a")
    out = np.concatenate(([c[0]], xyz * arcsinc_z(z)))
    return SpacetimePoint(Chart.FERMI_CARTESIAN, tuple(out))


def _spatial_jacobian(k: float, xs: np.ndarray) -> np.ndarray:
    z = k * float(xs @ xs)
    return sinc_z(z) * np.eye(3) + 2.0 * k * sinc_z_deriv(z) * np.outer(xs, xs)


def transform_jacobian(spec: MetricSpec, fp) -> np.ndarray:
    """d(t, x, y, z)/d(x0, x1, x2, x3) of ``fermi_to_cartesian``, analytic."""
    x = coords_of(fp, Chart.FERMI_CARTESIAN)
    xs = x[1:]
    _check_rho(spec, math.sqrt(float(xs @ xs)))
    J = np.zeros((4, 4))
    J[0, 0] = 1.0
    J[1:, 1:] = _spatial_jacobian(spec.k, xs)
    return J


def _fermi_g00(spec: MetricSpec, xs: np.ndarray, rho: float) -> float:
    X = xs * sinc_z(spec.k * rho * rho)
    if not spec.extended_fermi:
        spec.check_spatial(X)
    return -(1.0 - spec.f(X))


def fermi_metric_components(spec: MetricSpec, xs: np.ndarray) -> np.ndarray:
    """Fermi-Cartesian metric at spatial point ``xs`` without domain checks."""
    k = spec.k
    z = k * float(xs @ xs)
    S = sinc_z(z)
    g = np.zeros((4, 4))
    g[0, 0] = -(1.0 - spec.f(xs * S))
    g[1:, 1:] = S * S * np.eye(3) + k * defect_z(z) * np.outer(xs, xs)
    return g


def fermi_metric_at(spec: MetricSpec, fp) -> np.ndarray:
    """Metric in Fermi-Cartesian coordinates.

    g00 = -(1 - f) at the image point, g0i = 0, and the spatial block is the
    radial projector plus (sin(a rho)/(a rho))^2 times the transverse
    projector (sinh for k < 0).
    """
    x = coords_of(fp, Chart.FERMI_CARTESIAN)
    xs = x[1:]
    rho = math.sqrt(float(xs @ xs))
    _check_rho(spec, rho, extended=True)
    g = fermi_metric_components(spec, xs)
    g[0, 0] = _fermi_g00(spec, xs, rho)
    return g


def fermi_metric_derivative(spec: MetricSpec, xs: np.ndarray) -> np.ndarray:
    """dg[l, i, j] = d g_ij / d x^l of the Fermi-Cartesian metric."""
    k = spec.k
    z = k * float(xs @ xs)
    S, dS = sinc_z(z), sinc_z_deriv(z)
    q, dq = defect_z(z), defect_z_deriv(z)
    eye = np.eye(3)
    dg = np.zeros((4, 4, 4))
    dg[1:, 0, 0] = spec.grad_f(xs * S) @ _spatial_jacobian(k, xs)
    dg[1:, 1:, 1:] = (
        2.0 * k * (2.0 * S * dS) * np.einsum("l,ij->lij", xs, eye)
        + 2.0 * k * k * dq * np.einsum("l,i,j->lij", xs, xs, xs)
        + k * q * (np.einsum("il,j->lij", eye, xs) + np.einsum("jl,i->lij", eye, xs))
    )
    return dg


def fermi_polar_metric_at(spec: MetricSpec, fp) -> np.ndarray:
    """Diagonal Fermi metric in (t, rho, theta, phi)."""
    t, rho, theta, phi = coords_of(fp, Chart.FERMI_POLAR)
    _check_rho(spec, rho, extended=True)
    if not 0.0 < theta < math.pi:
        raise DomainError("Fermi polar metric is degenerate on the polar axis")
    g00 = _fermi_g00(spec, spherical_to_cartesian(rho, theta, phi), rho)
    areal = (rho * sinc_z(spec.k * rho * rho)) ** 2
    return np.diag([g00, 1.0, areal, areal * math.sin(theta) ** 2])


def polar_to_fermi_cartesian(fp) -> SpacetimePoint:
    t, rho, theta, phi = coords_of(fp, Chart.FERMI_POLAR)
    return SpacetimePoint(Chart.FERMI_CARTESIAN,
                          (t, *spherical_to_cartesian(rho, theta, phi)))


def polar_jacobian(fp) -> np.ndarray:
    """d(x0, x1, x2, x3)/d(t, rho, theta, phi)."""
    t, rho, theta, phi = coords_of(fp, Chart.FERMI_POLAR)
    return spherical_to_cartesian_jacobian(rho, theta, phi)


def worldline_metric_error(spec: MetricSpec, t: float) -> float:
    return float(np.max(np.abs(fermi_metric_at(spec, (t, 0.0, 0.0, 0.0)) - ETA)))
