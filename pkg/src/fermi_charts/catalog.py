"""Static metric family and the catalog of example spacetimes.

Every spacetime here is written in static Cartesian coordinates (t, x, y, z) as

    ds^2 = -(1 - f) dt^2 + dx^2 + dy^2 + dz^2 + [(1 - k r^2)^-1 - 1] dr^2

with f and its gradient vanishing at the spatial origin. Geometric units
(G = c = 1), signature (-,+,+,+), index order (t, x, y, z).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


class DomainError(ValueError):
    """A point or parameter lies outside the region where a chart is valid."""


class Chart(enum.Enum):
    CARTESIAN_STATIC = "cartesian_static"
    FERMI_CARTESIAN = "fermi_cartesian"
    FERMI_POLAR = "fermi_polar"
    STATIC_SPHERICAL = "static_spherical"


_ANGULAR = (Chart.FERMI_POLAR, Chart.STATIC_SPHERICAL)


@dataclass(frozen=True)
class SpacetimePoint:
    """Four coordinates, time first, tagged with their chart.

    Polar charts order the coordinates as (t, radius, theta, phi).
    """

    chart: Chart
    coords: tuple[float, float, float, float]

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        if len(c) != 4:
            raise ValueError(f"expected 4 coordinates, got {len(c)}")
        if self.chart in _ANGULAR:
            if c[1] < 0:
                raise DomainError(f"negative radius {c[1]}")
            if not (0.0 <= c[2] <= math.pi and 0.0 <= c[3] < 2 * math.pi):
                raise DomainError(f"angles out of range: theta={c[2]}, phi={c[3]}")
        object.__setattr__(self, "coords", c)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def t(self) -> float:
        return self.coords[0]

    @property
    def spatial(self) -> np.ndarray:
        return np.array(self.coords[1:])


def coords_of(p, chart: Chart) -> np.ndarray:
    """Coordinates of ``p`` as an array; raw sequences are taken to be in ``chart``."""
    if isinstance(p, SpacetimePoint):
        if p.chart is not chart:
            raise ValueError(f"expected a {chart.value} point, got {p.chart.value}")
        return p.array
    c = np.asarray(p, dtype=float)
    if c.shape != (4,):
        raise ValueError(f"expected 4 coordinates, got shape {c.shape}")
    return c


@dataclass(frozen=True)
class MetricSpec:
    """One member of the static metric family.

    Parameters
    ----------
    f : callable
        ``f(xyz) -> float`` for a spatial 3-vector; must vanish with its
        gradient at the origin.
    grad_f : callable
        ``grad_f(xyz) -> ndarray(3)``, the exact gradient of ``f``.
    k : float
        Constant in the radial term, units 1/length^2.
    r_limit : float
        Outer radius of the static chart. Defaults to ``1/sqrt(k)`` for k > 0
        and infinity otherwise.
    r_closed : bool
        Whether ``r == r_limit`` belongs to the chart.
    extended_fermi : bool
        Allow Fermi-chart quantities (metric, curvature, Jacobi fields) out to
        ``rho < pi/a`` instead of ``pi/(2a)``. Only valid when f is identically 0.
    """

    f: Callable[[np.ndarray], float]
    grad_f: Callable[[np.ndarray], np.ndarray]
    k: float
    r_limit: float = math.inf
    r_closed: bool = False
    extended_fermi: bool = False
    name: str = "custom"

    def __post_init__(self):
        if self.k > 0:
            horizon = 1.0 / math.sqrt(self.k)
            if self.r_limit > horizon or (self.r_limit == horizon and self.r_closed):
                object.__setattr__(self, "r_limit", horizon)
                object.__setattr__(self, "r_closed", False)
        if self.extended_fermi and self.k <= 0:
            raise ValueError("extended Fermi domain only applies for k > 0")

    @property
    def a(self) -> float:
        return math.sqrt(abs(self.k))

    def spatial_domain(self, r: float) -> bool:
        if r < 0:
            return False
        if r < self.r_limit:
            return True
        return self.r_closed and r == self.r_limit

    def check_spatial(self, xyz) -> float:
        """Return r for ``xyz``, raising DomainError if it is outside the chart."""
        r = math.sqrt(float(np.dot(xyz, xyz)))
        if not self.spatial_domain(r):
            raise DomainError(f"r = {r!r} outside static chart (limit {self.r_limit!r})")
        return r


# --- radial profiles --------------------------------------------------------

def _zero(xyz):
    return 0.0


def _zero_grad(xyz):
    return np.zeros(3)


def minkowski_spec() -> MetricSpec:
    return MetricSpec(_zero, _zero_grad, 0.0, name="minkowski")


class Kind(enum.Enum):
    MINKOWSKI = "minkowski"
    DE_SITTER = "de_sitter"
    ANTI_DE_SITTER = "anti_de_sitter"
    EINSTEIN_STATIC = "einstein_static"
    INTERIOR_SCHWARZSCHILD = "interior_schwarzschild"


@dataclass(frozen=True)
class InteriorProfile:
    """A(r), B(r) and R0 of the constant-density fluid sphere with Lambda."""

    M: float
    R: float
    lam: float

    @property
    def R0_sq(self) -> float:
        return 3.0 * self.R ** 3 / (6.0 * self.M + self.lam * self.R ** 3)

    @property
    def c_surface(self) -> float:
        return 0.5 * (3.0 - self.R0_sq * self.lam) * math.sqrt(1.0 - self.R ** 2 / self.R0_sq)

    @property
    def c_center(self) -> float:
        return 0.5 * (1.0 - self.R0_sq * self.lam)

    def bracket(self, r: float) -> float:
        """sqrt(A(r)) with its sign; positive on the fluid for valid parameters."""
        return self.c_surface - self.c_center * math.sqrt(1.0 - r * r / self.R0_sq)

    def A(self, r: float) -> float:
        return self.bracket(r) ** 2

    def B(self, r: float) -> float:
        return 1.0 / (1.0 - r * r / self.R0_sq)

    def dA_over_r(self, r: float) -> float:
        """A'(r)/r, regular at r = 0."""
        return (2.0 * self.bracket(r) * self.c_center
                / (self.R0_sq * math.sqrt(1.0 - r * r / self.R0_sq)))

    def validate(self, n: int = 1025) -> None:
        if not (self.M > 0 and self.R > 0):
            raise DomainError("interior Schwarzschild needs M > 0 and R > 0")
        denom = 6.0 * self.M + self.lam * self.R ** 3
        if denom <= 0:
            raise DomainError("R0^2 = 3R^3/(6M + Lambda R^3) is not positive")
        if self.R ** 2 >= self.R0_sq:
            raise DomainError(f"B(r) not positive on [0, R]: R^2={self.R ** 2} >= R0^2={self.R0_sq}")
        # bracket(R) = sqrt(1 - R^2/R0^2) > 0, so A > 0 on [0, R] iff the bracket
        # never reaches zero there
        rs = np.linspace(0.0, self.R, n)
        brackets = np.array([self.bracket(r) for r in rs])
        if np.any(brackets <= 0) or np.any(brackets ** 2 <= 0):
            bad = rs[np.argmin(brackets)]
            raise DomainError(f"A(r) <= 0 on [0, R] (at r = {bad:.6g})")


@dataclass(frozen=True)
class CatalogEntry:
    """A named example spacetime and its resolved metric."""

    kind: Kind
    params: Mapping[str, float]
    spec: MetricSpec
    interior: InteriorProfile | None = field(default=None, repr=False)

    @property
    def time_scale(self) -> float:
        """Ratio t / t_bar between catalog time and the fluid's original time."""
        if self.interior is None:
            return 1.0
        return math.sqrt(self.interior.A(0.0))

    @property
    def extended_fermi(self) -> bool:
        return self.spec.extended_fermi

    def f_radial(self, r: float) -> float:
        if self.kind in (Kind.DE_SITTER, Kind.ANTI_DE_SITTER):
            return self.spec.k * r * r
        if self.interior is not None:
            return 1.0 - self.interior.A(r) / self.interior.A(0.0)
        return 0.0

    def df_over_r(self, r: float) -> float:
        if self.kind in (Kind.DE_SITTER, Kind.ANTI_DE_SITTER):
            return 2.0 * self.spec.k
        if self.interior is not None:
            return -self.interior.dA_over_r(r) / self.interior.A(0.0)
        return 0.0

    def lapse_fermi(self, rho: float) -> float:
        """Closed-form sqrt(-g00) in the Fermi chart as a function of rho.

        The signed continuation is returned (cos(a rho) for de Sitter), so it
        crosses zero transversally at a horizon.
        """
        a = self.spec.a
        if self.kind is Kind.DE_SITTER:
            return math.cos(a * rho)
        if self.kind is Kind.ANTI_DE_SITTER:
            return math.cosh(a * rho)
        if self.interior is not None:
            ip = self.interior
            return (ip.c_surface - ip.c_center * math.cos(a * rho)) / ip.bracket(0.0)
        return 1.0

    def curvature_fermi(self, rho: float) -> float:
        """Closed-form Gaussian curvature of the (t, rho) slice."""
        if self.kind in (Kind.DE_SITTER, Kind.ANTI_DE_SITTER):
            return self.spec.k
        if self.interior is not None:
            ip = self.interior
            a = self.spec.a
            sqrt_A = ip.c_surface - ip.c_center * math.cos(a * rho)
            return -(1.0 - ip.R0_sq * ip.lam) * math.cos(a * rho) / (2.0 * ip.R0_sq * sqrt_A)
        return 0.0


def _radial_spec(entry_kind: Kind, k: float, f_r, df_over_r, **kw) -> MetricSpec:
    def f(xyz):
        return f_r(math.sqrt(float(np.dot(xyz, xyz))))

    def grad_f(xyz):
        xyz = np.asarray(xyz, dtype=float)
        return df_over_r(math.sqrt(float(xyz @ xyz))) * xyz

    return MetricSpec(f, grad_f, k, name=entry_kind.value, **kw)


_REQUIRED = {
    Kind.MINKOWSKI: (),
    Kind.DE_SITTER: ("lambda",),
    Kind.ANTI_DE_SITTER: ("lambda",),
    Kind.EINSTEIN_STATIC: ("R",),
    Kind.INTERIOR_SCHWARZSCHILD: ("M", "R", "lambda"),
}


def make_catalog_entry(kind: Kind | str, params: Mapping[str, float] | None = None) -> CatalogEntry:
    """Build one of the example spacetimes.

    ``params`` uses the keys ``lambda``, ``R`` and ``M``. For the interior
    Schwarzschild fluid the returned time coordinate is t = sqrt(A(0)) t_bar.
    """
    kind = Kind(kind)
    params = dict(params or {})
    missing = [key for key in _REQUIRED[kind] if key not in params]
    if missing:
        raise ValueError(f"{kind.value} requires parameters {missing}")
    extra = set(params) - set(_REQUIRED[kind])
    if extra:
        raise ValueError(f"{kind.value} does not take parameters {sorted(extra)}")
    params = {key: float(v) for key, v in params.items()}
    for key, v in params.items():
        if not math.isfinite(v):
            raise ValueError(f"parameter {key} must be finite, got {v}")

    if kind is Kind.MINKOWSKI:
        return CatalogEntry(kind, params, minkowski_spec())

    if kind in (Kind.DE_SITTER, Kind.ANTI_DE_SITTER):
        lam = params["lambda"]
        if kind is Kind.DE_SITTER and not lam > 0:
            raise DomainError(f"de Sitter needs Lambda > 0, got {lam}")
        if kind is Kind.ANTI_DE_SITTER and not lam < 0:
            raise DomainError(f"anti-de Sitter needs Lambda < 0, got {lam}")
        k = lam / 3.0
        spec = _radial_spec(kind, k, lambda r: k * r * r, lambda r: 2.0 * k)
        return CatalogEntry(kind, params, spec)

    if kind is Kind.EINSTEIN_STATIC:
        R = params["R"]
        if not R > 0:
            raise DomainError(f"Einstein static universe needs R > 0, got {R}")
        spec = MetricSpec(_zero, _zero_grad, 1.0 / R ** 2, extended_fermi=True, name=kind.value)
        return CatalogEntry(kind, params, spec)

    ip = InteriorProfile(params["M"], params["R"], params["lambda"])
    ip.validate()
    A0 = ip.A(0.0)
    spec = _radial_spec(
        kind,
        1.0 / ip.R0_sq,
        lambda r: 1.0 - ip.A(r) / A0,
        lambda r: -ip.dA_over_r(r) / A0,
        r_limit=ip.R,
        r_closed=True,
    )
    return CatalogEntry(kind, params, spec, interior=ip)


_CONFIG_KEYS = {"kind", "lambda", "R", "M"}


def entry_from_config(config: Mapping) -> CatalogEntry:
    """Build an entry from ``{"kind": ..., "lambda": ..., "R": ..., "M": ...}``.

    Unknown keys, and keys the chosen kind does not use, are rejected.
    """
    if not isinstance(config, Mapping):
        raise ValueError("spacetime config must be a JSON object")
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown spacetime config keys: {sorted(unknown)}")
    if "kind" not in config:
        raise ValueError("spacetime config needs a 'kind'")
    try:
        kind = Kind(config["kind"])
    except ValueError:
        raise ValueError(f"unknown spacetime kind {config['kind']!r}") from None
    params = {key: v for key, v in config.items() if key != "kind"}
    for key, v in params.items():
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError(f"parameter {key} must be a number")
    return make_catalog_entry(kind, params)


# --- metric evaluation ------------------------------------------------------

def _radial_coefficient(k: float, r2: float) -> float:
    # ((1 - k r^2)^-1 - 1) / r^2 simplifies exactly; no 0/0 at the origin
    return k / (1.0 - k * r2)


def static_metric_components(spec: MetricSpec, xyz: np.ndarray) -> np.ndarray:
    """Metric of the static Cartesian chart without domain checks."""
    r2 = float(xyz @ xyz)
    g = np.empty((4, 4))
    g[0, 0] = -(1.0 - spec.f(xyz))
    g[0, 1:] = g[1:, 0] = 0.0
    g[1:, 1:] = np.eye(3) + _radial_coefficient(spec.k, r2) * np.outer(xyz, xyz)
    return g


def static_metric_derivative(spec: MetricSpec, xyz: np.ndarray) -> np.ndarray:
    """dg[l, i, j] = d g_ij / d x^l in the static Cartesian chart."""
    r2 = float(xyz @ xyz)
    k = spec.k
    h = _radial_coefficient(k, r2)
    dh = k * k / (1.0 - k * r2) ** 2  # dh/d(r^2)
    dg = np.zeros((4, 4, 4))
    dg[1:, 0, 0] = spec.grad_f(xyz)
    eye = np.eye(3)
    dg[1:, 1:, 1:] = (2.0 * dh * np.einsum("l,i,j->lij", xyz, xyz, xyz)
                      + h * (np.einsum("il,j->lij", eye, xyz) + np.einsum("jl,i->lij", eye, xyz)))
    return dg


def metric_at(spec: MetricSpec, p) -> np.ndarray:
    """4x4 metric of the static Cartesian chart at ``p``."""
    c = coords_of(p, Chart.CARTESIAN_STATIC)
    xyz = c[1:]
    spec.check_spatial(xyz)
    if 1.0 - spec.k * float(xyz @ xyz) <= 0:
        raise DomainError("1 - k r^2 <= 0")
    return static_metric_components(spec, xyz)


def static_spherical_metric_at(entry: CatalogEntry, p) -> np.ndarray:
    """Diagonal metric in (t, r, theta, phi).

    For the interior Schwarzschild fluid the time coordinate is the original
    t_bar, so g_tt = -A(r); divide g_tt by ``entry.time_scale**2`` to get the
    catalog-time component.
    """
    t, r, theta, phi = coords_of(p, Chart.STATIC_SPHERICAL)
    if not entry.spec.spatial_domain(r):
        raise DomainError(f"r = {r!r} outside static chart")
    if not 0.0 < theta < math.pi:
        raise DomainError("static spherical metric is degenerate on the polar axis")
    k = entry.spec.k
    if entry.interior is not None:
        gtt = -entry.interior.A(r)
    else:
        gtt = -(1.0 - entry.f_radial(r))
    return np.diag([gtt, 1.0 / (1.0 - k * r * r), r * r, (r * math.sin(theta)) ** 2])


def static_spherical_metric_derivative(entry: CatalogEntry, p) -> np.ndarray:
    t, r, theta, phi = coords_of(p, Chart.STATIC_SPHERICAL)
    k = entry.spec.k
    dg = np.zeros((4, 4, 4))
    if entry.interior is not None:
        dg[1, 0, 0] = -entry.interior.dA_over_r(r) * r
    else:
        dg[1, 0, 0] = entry.df_over_r(r) * r
    dg[1, 1, 1] = 2.0 * k * r / (1.0 - k * r * r) ** 2
    dg[1, 2, 2] = 2.0 * r
    dg[1, 3, 3] = 2.0 * r * math.sin(theta) ** 2
    dg[2, 3, 3] = 2.0 * r * r * math.sin(theta) * math.cos(theta)
    return dg


def spherical_to_cartesian_jacobian(r: float, theta: float, phi: float) -> np.ndarray:
    """d(t, x, y, z)/d(t, r, theta, phi)."""
    st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
    J = np.zeros((4, 4))
    J[0, 0] = 1.0
    J[1:, 1] = [st * cp, st * sp, ct]
    J[1:, 2] = [r * ct * cp, r * ct * sp, -r * st]
    J[1:, 3] = [-r * st * sp, r * st * cp, 0.0]
    return J


def spherical_to_cartesian(r: float, theta: float, phi: float) -> np.ndarray:
    return r * np.array([math.sin(theta) * math.cos(phi),
                         math.sin(theta) * math.sin(phi),
                         math.cos(theta)])


@dataclass(frozen=True)
class Tetrad:
    """Orthonormal frame e_0..e_3 (rows) in static Cartesian components."""

    vectors: np.ndarray

    @classmethod
    def on_worldline(cls) -> "Tetrad":
        # metric is eta on the worldline, so the coordinate basis is orthonormal
        return cls(np.eye(4))

    def orthonormality_error(self, spec: MetricSpec, t: float = 0.0) -> float:
        g = metric_at(spec, (t, 0.0, 0.0, 0.0))
        gram = self.vectors @ g @ self.vectors.T
        return float(np.max(np.abs(gram - ETA)))
