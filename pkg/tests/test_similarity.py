"""Coordinate maps, shape function, kinematics, and the profile model."""

import json

import numpy as np
import pytest

import swirlsolve as sw
from swirlsolve.errors import DomainError

# Expected values below were frozen from 50-digit mpmath evaluation of the
# defining formulas (see test_shape_function_extended_precision, which keeps
# the oracle alive for the stability-critical arguments).
PHI_VALUES = [
    (0.0, 0.0),
    (1.0, 0.4142135623730950488),
    (0.5, 0.3090169943749474241),
    (2.0, 0.47213595499957939282),
    (100.0, 0.49998750062496094023),
    (-1.0, -2.4142135623730950488),
    (-2.0, -8.4721359549995793928),
]

PHI_PRIME_VALUES = [
    (0.0, 1.0),
    (1.0, 0.1213203435596425732),
    (2.0, 0.024922359499621453537),
    (3.0, 0.0083275543199207307979),
]


@pytest.mark.parametrize("xi, expected", PHI_VALUES)
def test_phi_spot_values(xi, expected):
    assert sw.phi(xi) == pytest.approx(expected, rel=1e-15, abs=1e-15)


@pytest.mark.parametrize("xi, expected", PHI_PRIME_VALUES)
def test_phi_prime_spot_values(xi, expected):
    assert sw.phi_prime(xi) == pytest.approx(expected, rel=1e-14, abs=1e-15)


def test_shape_function_extended_precision():
    """Cancellation-safe form agrees with 50-digit arithmetic near the limit."""
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 50
    for xi in (1e3, 1e6, 1e8, -1e6):
        exact = float(mp.mpf(xi) * mp.sqrt(1 + mp.mpf(xi) ** 2) - mp.mpf(xi) ** 2)
        assert sw.phi(xi) == pytest.approx(exact, rel=5e-16)


def test_phi_monotone_positive_bounded():
    xi = np.geomspace(1e-8, 1e6, 400)
    vals = sw.phi(xi)
    assert np.all(vals > 0.0)
    assert np.all(np.diff(vals) > 0.0)  # strict until float64 saturates at 1/2
    assert np.all(vals < 0.5)
    assert sw.phi(1e6) == pytest.approx(0.5, abs=1e-12)
    assert np.all(sw.phi_prime(np.linspace(-50, 50, 501)) > 0.0)


def test_phi_prime_matches_finite_difference():
    # beyond xi ~ 30 the difference quotient of phi ~ 1/2 - 1/(8 xi^2) sinks
    # below float64 rounding noise at this step, so the window stops there
    step = 1e-5
    xi = np.concatenate([np.geomspace(0.01, 30.0, 50), [-3.0, -0.5]])
    fd = (sw.phi(xi + step) - sw.phi(xi - step)) / (2 * step)
    assert np.max(np.abs(fd / sw.phi_prime(xi) - 1.0)) < 1e-6


def test_compact_round_trip():
    xi = np.concatenate([[0.0], np.geomspace(1e-6, 50.0, 300)])
    xi = np.concatenate([-xi[::-1], xi])
    x = sw.xi_to_x(xi)
    assert np.all(np.abs(x) < 1.0)
    back = sw.x_to_xi(x)
    scale = np.maximum(1.0, np.abs(xi))
    assert np.max(np.abs(back - xi) / scale) < 1e-12


def test_compact_round_trip_conditioning_bound():
    """For large xi the map's float64 conditioning governs the round trip.

    One ulp of x near 1 expands by dxi/dx = (1+xi^2)^(3/2); the round trip
    stays within a few ulps of that information bound all the way to 1e6.
    """
    xi = np.geomspace(1.0, 1e6, 200)
    xi = np.concatenate([-xi, xi])
    back = sw.x_to_xi(sw.xi_to_x(xi))
    bound = 4.0 * np.finfo(float).eps * (1.0 + xi**2) ** 1.5
    assert np.all(np.abs(back - xi) <= np.maximum(bound, 1e-12))


def test_compact_spot_values():
    assert sw.xi_to_x(0.0) == 0.0
    assert sw.xi_to_x(1.0) == pytest.approx(0.7071067811865475244, rel=1e-15)
    assert sw.x_to_xi(sw.xi_to_x(1.0)) == pytest.approx(1.0, abs=1e-12)


def test_compact_rejects_unit_magnitude():
    with pytest.raises(DomainError):
        sw.x_to_xi(1.0)
    with pytest.raises(DomainError):
        sw.x_to_xi(-1.5)


@pytest.mark.parametrize(
    "theta, theta_prime, xi, expected",
    [
        (0.0, 0.0, 5.0, (0.0, 0.0)),
        (2.0, 0.0, 3.0, (0.0, 2.0)),
        (1.0, -1.0, 2.0, (1.0, 3.0)),
    ],
)
def test_velocities_from_theta(theta, theta_prime, xi, expected):
    assert sw.velocities_from_theta(theta, theta_prime, xi) == expected


def test_velocities_linear_in_theta():
    rng = np.random.default_rng(7)
    th, tp = rng.normal(size=20), rng.normal(size=20)
    th2, tp2 = rng.normal(size=20), rng.normal(size=20)
    xi = rng.uniform(0, 10, size=20)
    for a, b in ((2.0, -3.0), (0.5, 1.5)):
        u1, w1 = sw.velocities_from_theta(th, tp, xi)
        u2, w2 = sw.velocities_from_theta(th2, tp2, xi)
        u, w = sw.velocities_from_theta(a * th + b * th2, a * tp + b * tp2, xi)
        assert np.allclose(u, a * u1 + b * u2, rtol=1e-13, atol=1e-13)
        assert np.allclose(w, a * w1 + b * w2, rtol=1e-13, atol=1e-13)


def _profile(grid, theta, theta_prime=None, v=None, p=None):
    grid = np.asarray(grid, float)
    zeros = np.zeros_like(grid)
    return sw.SimilarityProfile(
        grid=grid,
        theta=theta,
        theta_prime=zeros if theta_prime is None else theta_prime,
        v=zeros if v is None else v,
        p=zeros if p is None else p,
        params=sw.FlowParameters(nu=0.0, v_swirl=0.0, e0=0.0),
    )


def test_serrin_transform_zero_profile():
    prof = _profile([0.5, 1.0, 2.0], [0.0, 0.0, 0.0])
    tr = sw.serrin_transform(prof)
    assert np.all(tr.theta_bar == 0.0)
    assert np.allclose(tr.x, sw.xi_to_x(prof.grid))


def test_serrin_transform_point_value():
    prof = _profile([1.0, 2.0], [-1.0, 0.0])
    tr = sw.serrin_transform(prof)
    assert tr.x[0] == pytest.approx(0.7071067811865475244, rel=1e-15)
    assert tr.theta_bar[0] == pytest.approx(np.sqrt(2.0), rel=1e-15)


def test_shape_function_compact_identity():
    x = np.linspace(0.0, 0.999, 1000)
    assert np.max(np.abs(sw.phi(sw.x_to_xi(x)) - x / (1.0 + x))) < 1e-10
    assert sw.phi(sw.x_to_xi(0.5)) == pytest.approx(1.0 / 3.0, abs=1e-14)


def test_flow_parameters_validation():
    with pytest.raises(DomainError):
        sw.FlowParameters(nu=-1.0, v_swirl=0.0, e0=0.0)
    with pytest.raises(DomainError):
        sw.FlowParameters(nu=1.0, v_swirl=0.0, e0=0.0, branch=2)
    with pytest.raises(DomainError):
        sw.FlowParameters(nu=np.nan, v_swirl=0.0, e0=0.0)
    p = sw.FlowParameters(nu=0.0, v_swirl=1.0, e0=1.0)
    assert p.k0_half_space == 1.5


def test_profile_validation():
    with pytest.raises(DomainError):
        _profile([0.0, 1.0, 2.0], [0.0, 0.0])  # length mismatch
    with pytest.raises(DomainError):
        _profile([0.0, 2.0, 1.0], [0.0, 0.0, 0.0])  # not increasing
    with pytest.raises(DomainError):
        _profile([0.0, 1.0], [np.nan, 0.0])


def test_profile_arrays_immutable():
    prof = _profile([0.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        prof.theta[0] = 1.0


def test_profile_derived_velocities():
    prof = _profile([0.0, 2.0], [1.0, 1.0], theta_prime=np.array([-1.0, -1.0]))
    assert np.allclose(prof.u, [1.0, 1.0])
    assert np.allclose(prof.w, [1.0, 3.0])


def test_profile_json_round_trip(tmp_path, viscous_111):
    path = tmp_path / "profile.json"
    sw.save_profile(viscous_111, path)
    loaded = sw.load_profile(path)
    assert np.array_equal(loaded.grid, viscous_111.grid)
    assert np.array_equal(loaded.theta, viscous_111.theta)
    assert np.array_equal(loaded.theta_prime, viscous_111.theta_prime)
    assert np.array_equal(loaded.v, viscous_111.v)
    assert np.array_equal(loaded.p, viscous_111.p)
    assert loaded.params == viscous_111.params
    assert loaded.convergence == viscous_111.convergence
    doc = json.loads(path.read_text())
    assert set(doc) == {"params", "grid", "theta", "theta_prime", "v", "p", "convergence"}
    assert set(doc["params"]) == {"nu", "v_swirl", "e0", "xi0", "branch"}


def test_profile_document_missing_field():
    with pytest.raises(DomainError):
        sw.profile_from_dict({"grid": [0, 1]})
