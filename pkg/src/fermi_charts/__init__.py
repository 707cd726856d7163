"""Exact Fermi coordinate charts for a family of static spacetimes, with numerical checks."""

from .catalog import (
    ETA,
    CatalogEntry,
    Chart,
    DomainError,
    Kind,
    MetricSpec,
    SpacetimePoint,
    Tetrad,
    entry_from_config,
    make_catalog_entry,
    metric_at,
    minkowski_spec,
    static_spherical_metric_at,
)
from .charts import (
    cartesian_to_fermi,
    fermi_metric_at,
    fermi_polar_metric_at,
    fermi_rho_limit,
    fermi_to_cartesian,
    r_of_rho,
    rho_of_r,
    scaled_profile,
    transform_jacobian,
)
from .curvature import (
    JacobiProfile,
    SubmanifoldSlice,
    first_positive_root,
    gaussian_curvature,
    horizon_scan,
    jacobi_separation,
    proper_time_factor,
)
from .geodesics import (
    GeodesicState,
    IntegratorConfig,
    MetricField,
    christoffel_at,
    exponential_map,
    integrate_geodesic,
    parallel_transport_check,
    radial_geodesic_residual,
)

__version__ = "0.1.0"
