import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fermi_charts import (
    Chart,
    GeodesicState,
    IntegratorConfig,
    SpacetimePoint,
    christoffel_at,
    exponential_map,
    fermi_to_cartesian,
    integrate_geodesic,
    make_catalog_entry,
    minkowski_spec,
    parallel_transport_check,
    radial_geodesic_residual,
)
from fermi_charts.geodesics import (
    SingularMetricError,
    fermi_field,
    minkowski_field,
    static_field,
    static_spherical_field,
)

SINH1 = 1.1752011936438014


def test_minkowski_christoffels_vanish(rng):
    for mode in ("exact", "finite_difference"):
        for _ in range(5):
            assert np.max(np.abs(christoffel_at(minkowski_field(), rng.normal(size=4), mode))) == 0.0


def test_minkowski_geodesic_is_straight():
    state = GeodesicState(SpacetimePoint(Chart.CARTESIAN_STATIC, (0, 1, 2, 3)), (1.0, 0.2, -0.3, 0.1))
    path = integrate_geodesic(minkowski_field(), state, 5.0)
    assert path.status == "complete"
    assert_allclose(path.end, [5.0, 2.0, 0.5, 3.5], atol=1e-12)


def test_de_sitter_static_christoffel():
    # g_tt = -(1 - r^2): Gamma^r_tt = -g^rr d_r g_tt / 2 = -(1 - r^2) r
    entry = make_catalog_entry("de_sitter", {"lambda": 3.0})
    gamma = christoffel_at(static_spherical_field(entry), (0, 0.5, 1.0, 0.3))
    assert gamma[1, 0, 0] == pytest.approx(-0.375, rel=1e-15)
    assert gamma[0, 0, 1] == pytest.approx(-0.5 / 0.75, rel=1e-15)
    assert gamma[2, 1, 2] == pytest.approx(1 / 0.5, rel=1e-15)


def test_christoffel_symmetric(entry, rng):
    fld = static_field(entry.spec)
    for _ in range(10):
        x = np.concatenate(([0.0], 0.3 * rng.normal(size=3)))
        gamma = christoffel_at(fld, x)
        assert np.max(np.abs(gamma - np.transpose(gamma, (0, 2, 1)))) == 0.0


@pytest.mark.parametrize("make_field", [static_field, fermi_field])
def test_finite_difference_matches_exact(entry, rng, make_field):
    fld = make_field(entry.spec)
    for _ in range(10):
        x = np.concatenate(([rng.normal()], 0.3 * rng.normal(size=3)))
        exact = christoffel_at(fld, x)
        assert np.max(np.abs(christoffel_at(fld, x, "finite_difference") - exact)) < 1e-8


def test_finite_difference_is_second_order(anti_de_sitter):
    fld = static_field(anti_de_sitter.spec)
    x = np.array([0.0, 0.6, -0.4, 0.3])
    exact = christoffel_at(fld, x)
    errs = [np.max(np.abs(christoffel_at(fld, x, "finite_difference", h=h) - exact)) for h in (1e-2, 5e-3)]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_singular_metric_rejected():
    from fermi_charts import MetricField
    fld = MetricField(lambda x: np.diag([0.0, 1.0, 1.0, 1.0]), lambda x: np.zeros((4, 4, 4)))
    with pytest.raises(SingularMetricError):
        christoffel_at(fld, np.zeros(4))


def test_christoffel_bad_mode(de_sitter):
    with pytest.raises(ValueError):
        christoffel_at(static_field(de_sitter.spec), np.zeros(4), "spectral")


def test_exponential_map_anti_de_sitter(anti_de_sitter):
    p = exponential_map(anti_de_sitter.spec, 0.0, (0, 1, 0), 1.0)
    assert_allclose(p.array, [0, 0, SINH1, 0], atol=1e-8)


def test_exponential_map_de_sitter(de_sitter):
    p = exponential_map(de_sitter.spec, 0.0, (1, 0, 0), math.pi / 3)
    assert_allclose(p.array, [0, math.sin(math.pi / 3), 0, 0], atol=1e-8)


def test_exponential_map_einstein_static(einstein):
    p = exponential_map(einstein.spec, 0.0, (0, 0, 1), 1.0)
    assert_allclose(p.array, [0, 0, 0, math.sin(1.0)], atol=1e-8)


def test_exponential_map_zero_length(de_sitter):
    assert exponential_map(de_sitter.spec, 2.5, (1, 0, 0), 0.0).coords == (2.5, 0.0, 0.0, 0.0)


def test_exponential_map_requires_unit_direction(de_sitter):
    with pytest.raises(ValueError):
        exponential_map(de_sitter.spec, 0.0, (1, 1, 0), 0.5)


def test_exponential_map_matches_closed_form(entry, rng):
    limit = 0.9 * (entry.spec.r_limit if math.isfinite(entry.spec.r_limit) else 2.0)
    for _ in range(5):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        s = limit * rng.uniform()
        tau = rng.uniform(-5, 5)
        numeric = exponential_map(entry.spec, tau, d, s).array
        closed = fermi_to_cartesian(entry.spec, np.concatenate(([tau], s * d))).array
        assert np.max(np.abs(numeric - closed)) < 1e-7


def test_exponential_map_time_translation(interior):
    d = np.array([0.6, 0.0, 0.8])
    p0 = exponential_map(interior.spec, 0.0, d, 0.7).array
    p1 = exponential_map(interior.spec, 4.25, d, 0.7).array
    assert p1[0] == 4.25
    assert np.max(np.abs(p1[1:] - p0[1:])) < 1e-12


def test_geodesic_norm_is_conserved(anti_de_sitter):
    fld = static_field(anti_de_sitter.spec)
    state = GeodesicState(SpacetimePoint(Chart.CARTESIAN_STATIC, (0, 0.2, 0.1, 0)), (1.2, 0.3, -0.4, 0.5))
    path = integrate_geodesic(fld, state, 3.0, samples=np.linspace(0, 3, 31))
    norms = path.norms(fld)
    assert np.max(np.abs(norms - norms[0])) < 1e-8


def test_geodesic_stops_at_horizon(de_sitter):
    state = GeodesicState(SpacetimePoint(Chart.CARTESIAN_STATIC, (0, 0, 0, 0)), (0.0, 1.0, 0.0, 0.0))
    path = integrate_geodesic(static_field(de_sitter.spec), state, 3.0)
    assert path.status == "boundary"
    # r = sin(s) touches r = 1 at s = pi/2
    assert path.s[-1] <= math.pi / 2
    assert path.end[1] == pytest.approx(math.sin(path.s[-1]), abs=1e-9)
    assert path.end[1] > 1 - 1e-5


def test_sampled_path_ends_on_boundary(de_sitter):
    state = GeodesicState(SpacetimePoint(Chart.CARTESIAN_STATIC, (0, 0, 0, 0)), (2.0, 1.0, 0.0, 0.0))
    path = integrate_geodesic(static_field(de_sitter.spec), state, 3.0, samples=np.linspace(0, 3, 7))
    assert path.status == "boundary"
    assert list(path.s[:2]) == [0.0, 0.5]
    assert path.end[1] > 1 - 1e-5


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(max_steps=0)


def test_radial_rays_are_geodesics(entry, rng):
    reach = 0.99 * (min(entry.spec.r_limit, 2.0))
    for mode in ("exact", "finite_difference"):
        d = rng.normal(size=3)
        assert radial_geodesic_residual(entry.spec, d / np.linalg.norm(d), reach, 30,
                                        t=rng.normal(), mode=mode) < 1e-8


def test_parallel_transport_preserves_tetrad(entry):
    assert parallel_transport_check(entry.spec, (0.0, 10.0)) < 1e-10


def test_parallel_transport_long_span():
    spec = make_catalog_entry("de_sitter", {"lambda": 0.3}).spec
    assert parallel_transport_check(spec, (0.0, 100.0)) < 1e-8
    assert parallel_transport_check(minkowski_spec(), (0.0, 100.0)) == 0.0
