import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spingeom import geometry
from spingeom._validation import metric_relative_error
from spingeom.geometry import (
    DegenerateManifoldError,
    DomainError,
    SingularityError,
    euler_characteristic,
    gaussian_curvature,
    gaussian_curvature_numeric,
    metric_closed_form,
    metric_numeric,
)
from spingeom.hilbert import ParamPoint, SystemConfig

CONFIGS = [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (2, 3)]


def _curvature_oracle(config, theta):
    # K = -(sqrt G)'' / (E sqrt G) for E dtheta^2 + G(theta) dxi^2 with constant E
    n, s = config.n_spins, mpmath.mpf(config.spin.twice_spin) / 2
    e = n * s / 2

    def root_g(t):
        return mpmath.sqrt(n * (n - 1) * s**2 / 2 * mpmath.sin(t) ** 2
                           * (1 + (4 * s * (n - 1) - 1) * mpmath.cos(t) ** 2))

    with mpmath.workdps(40):
        t = mpmath.mpf(theta)
        return float(-mpmath.diff(root_g, t, 2) / (e * root_g(t)))


# --- metric ----------------------------------------------------------------

def test_two_qubit_equator_metric():
    m = metric_closed_form(SystemConfig.create(2, 1), ParamPoint(np.pi / 2))
    assert (m.g_tt, m.g_xx, m.g_px) == (0.5, pytest.approx(0.25, abs=1e-16), pytest.approx(0.0, abs=1e-16))
    num = metric_numeric(SystemConfig.create(2, 1), ParamPoint(np.pi / 2, 0.0, 0.7))
    assert num.g_tt == pytest.approx(0.5, rel=1e-8)
    assert num.g_xx == pytest.approx(0.25, rel=1e-8)
    assert abs(num.g_px) < 1e-9


@pytest.mark.parametrize("n,ts", CONFIGS)
def test_pole_components_vanish(n, ts):
    m = metric_closed_form(SystemConfig.create(n, ts), ParamPoint(0.0, 0.3, 1.0))
    assert m.g_pp == 0 and m.g_xx == 0 and m.g_px == 0
    assert m.g_tt == n * ts / 4


def test_g_xx_vanishes_towards_poles():
    config = SystemConfig.create(3, 2)
    for theta in (1e-4, np.pi - 1e-4):
        assert geometry.g_xx_closed_form(config, theta) < 1e-6


def test_mixed_component_full_symmetric_value():
    # The symmetric tensor component g_px carries N(N-1) s^2 cos sin^2; the line
    # element then contains 2 g_px dphi dxi. The half-size coefficient is what
    # multiplies the symmetric product dphi dxi when it is written only once.
    config = SystemConfig.create(3, 2)
    point = ParamPoint(1.0, 0.0, 0.3)
    numeric = metric_numeric(config, point)
    full = 3 * 2 * 1.0 * np.cos(1.0) * np.sin(1.0) ** 2
    assert numeric.g_px == pytest.approx(full, rel=1e-6)
    assert metric_closed_form(config, point).g_px == pytest.approx(full, rel=1e-15)
    assert numeric.g_px / 2 == pytest.approx(0.5 * 3 * 2 * np.cos(1.0) * np.sin(1.0) ** 2, rel=1e-6)


@pytest.mark.parametrize("n,ts", CONFIGS)
def test_numeric_metric_matches_closed_form(n, ts):
    config = SystemConfig.create(n, ts)
    for theta in np.linspace(0.1, np.pi - 0.1, 7):
        for xi in (0.0, 1.3, 2 * np.pi):
            point = ParamPoint(theta, 0.37, xi)
            numeric = geometry.fubini_study_matrix(config, point)
            closed = metric_closed_form(config, point).as_matrix()
            assert metric_relative_error(numeric, closed) < 1e-6
            # symmetry of the real part within stencil noise
            assert np.max(np.abs(numeric - numeric.T)) < 1e-9


@pytest.mark.parametrize("n,ts", [(2, 1), (3, 2)])
def test_metric_independent_of_xi_and_phi(n, ts):
    config = SystemConfig.create(n, ts)
    theta = 0.9
    ref = metric_closed_form(config, ParamPoint(theta)).as_matrix()
    for phi in np.linspace(0, 2 * np.pi, 5):
        for xi in np.linspace(0, 4 * np.pi, 5):
            assert np.array_equal(metric_closed_form(config, ParamPoint(theta, phi, xi)).as_matrix(), ref)
            numeric = geometry.fubini_study_matrix(config, ParamPoint(theta, phi, xi))
            assert metric_relative_error(numeric, ref) < 1e-6
    k = [gaussian_curvature_numeric(config, theta, xi=xi) for xi in (0.0, 1.0, 5.0)]
    np.testing.assert_allclose(k, gaussian_curvature(config, theta), rtol=1e-6)


@pytest.mark.parametrize("n,ts", [(1, 1), (1, 3), (2, 1), (4, 2)])
def test_reduces_to_sphere_at_zero_time(n, ts):
    config = SystemConfig.create(n, ts)
    for theta in (0.3, 1.2, 2.8):
        m = metric_closed_form(config, ParamPoint(theta, 0.0, 0.0))
        g_tt, g_pp = geometry.sphere_metric(config, theta)
        radius2 = n * ts / 4
        assert (m.g_tt, m.g_pp) == pytest.approx((g_tt, g_pp), rel=1e-15)
        assert g_tt == radius2 and g_pp == pytest.approx(radius2 * np.sin(theta) ** 2)
        numeric = metric_numeric(config, ParamPoint(theta, 0.5, 0.0))
        assert (numeric.g_tt, numeric.g_pp) == pytest.approx((g_tt, g_pp), rel=1e-8)


def test_stencil_too_close_to_pole():
    config = SystemConfig.create(2, 1)
    with pytest.raises(DomainError):
        metric_numeric(config, ParamPoint(1e-6))
    with pytest.raises(DomainError):
        metric_numeric(config, ParamPoint(1.0), step=0.0)


# --- curvature --------------------------------------------------------------

def test_two_qubit_equator_is_flat():
    config = SystemConfig.create(2, 1)
    assert gaussian_curvature(config, np.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert abs(gaussian_curvature_numeric(config, np.pi / 2)) < 1e-6


@pytest.mark.parametrize("twice_spin", [1, 2, 3, 4, 6])
def test_pole_limit_is_maximal_curvature(twice_spin):
    config = SystemConfig.create(2, twice_spin)
    s = twice_spin / 2
    k_max = (2 / s) * (2 - 3 / (8 * s))
    assert geometry.max_curvature_two_spin(s) == pytest.approx(k_max, rel=1e-15)
    for theta in (1e-6, np.pi - 1e-6):
        assert gaussian_curvature(config, theta) == pytest.approx(k_max, abs=1e-9)
    assert geometry.max_curvature_two_spin(0.5) == 5.0


@pytest.mark.parametrize("n,ts", CONFIGS)
def test_closed_curvature_matches_christoffel_route(n, ts):
    config = SystemConfig.create(n, ts)
    thetas = np.linspace(0.1, np.pi - 0.1, 15)
    closed = gaussian_curvature(config, thetas)
    numeric = np.array([gaussian_curvature_numeric(config, t) for t in thetas])
    np.testing.assert_allclose(numeric, closed, rtol=1e-4, atol=1e-9)
    oracle = np.array([_curvature_oracle(config, t) for t in thetas])
    np.testing.assert_allclose(closed, oracle, rtol=1e-12, atol=1e-12)


def test_spin_one_triplet_reference_point():
    config = SystemConfig.create(3, 2)
    assert gaussian_curvature_numeric(config, 1.2) == pytest.approx(gaussian_curvature(config, 1.2), rel=1e-4)


def test_negative_curvature_exists_for_three_spin_ones():
    k = gaussian_curvature(SystemConfig.create(3, 2), np.linspace(0.05, np.pi - 0.05, 400))
    assert k.min() < 0 < k.max()
    assert gaussian_curvature(SystemConfig.create(3, 2), np.pi / 2) == pytest.approx(-4.0)


def test_four_qubit_sign_pattern():
    config = SystemConfig.create(4, 1)
    thetas = np.linspace(0.1, np.pi - 0.1, 41)
    closed = gaussian_curvature(config, thetas)
    numeric = np.array([gaussian_curvature_numeric(config, t) for t in thetas])
    assert np.all(np.abs(closed) > 1e-6)  # no grid point sits on a zero
    np.testing.assert_array_equal(np.sign(numeric), np.sign(closed))
    assert (closed > 0).any() and (closed < 0).any()


def test_curvature_vectorized_matches_scalar():
    config = SystemConfig.create(3, 1)
    thetas = np.array([0.2, 1.0, 2.5])
    np.testing.assert_array_equal(gaussian_curvature(config, thetas),
                                  [gaussian_curvature(config, t) for t in thetas])


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(CONFIGS), st.floats(0.01, np.pi - 0.01))
def test_curvature_mirror_symmetry(system, theta):
    config = SystemConfig.create(*system)
    assert gaussian_curvature(config, theta) == pytest.approx(gaussian_curvature(config, np.pi - theta),
                                                              rel=1e-9, abs=1e-9)


def test_curvature_errors():
    with pytest.raises(SingularityError):
        gaussian_curvature(SystemConfig.create(2, 1), 0.0)
    with pytest.raises(SingularityError):
        gaussian_curvature(SystemConfig.create(2, 1), np.array([1.0, np.pi]))
    with pytest.raises(DegenerateManifoldError):
        gaussian_curvature(SystemConfig.create(1, 2), 1.0)
    with pytest.raises(DegenerateManifoldError):
        gaussian_curvature_numeric(SystemConfig.create(1, 2), 1.0)
    with pytest.raises(DomainError):
        gaussian_curvature_numeric(SystemConfig.create(2, 1), 1e-3)


# --- topology -----------------------------------------------------------------

def test_two_qubit_sphere_topology():
    report = euler_characteristic(SystemConfig.create(2, 1), np.pi, 1e-3)
    assert report.euler_characteristic == pytest.approx(2.0, abs=1e-2)


def test_bulk_integral_matches_closed_form():
    config = SystemConfig.create(3, 2)
    report = euler_characteristic(config, 1.0, 1e-3)
    assert report.bulk_closed_form == 8.0
    assert report.bulk_integral == pytest.approx(8.0, rel=1e-2)


@pytest.mark.parametrize("n,ts,xi_max", [(2, 1, np.pi), (3, 2, 1.0), (4, 1, 2.0), (2, 3, 0.5), (5, 1, 0.3)])
def test_euler_characteristic_stable_in_epsilon(n, ts, xi_max):
    config = SystemConfig.create(n, ts)
    chis = [euler_characteristic(config, xi_max, eps).euler_characteristic for eps in (1e-2, 1e-3, 1e-4)]
    np.testing.assert_allclose(chis, 2.0, atol=1e-2)


def test_angular_defect():
    config = SystemConfig.create(3, 2)
    assert geometry.angular_defect(config, 1.0) == pytest.approx(2 * (2 * np.pi - 4.0))
    # closed-form bulk and defect sum to exactly 4 pi
    for xi_max in (0.1, 1.0, 7.0):
        total = geometry.bulk_closed_form(config, xi_max) + geometry.angular_defect(config, xi_max)
        assert total == pytest.approx(4 * np.pi)


def test_topology_errors():
    with pytest.raises(DegenerateManifoldError):
        euler_characteristic(SystemConfig.create(1, 1), 1.0)
    with pytest.raises(DomainError):
        euler_characteristic(SystemConfig.create(2, 1), 0.0)
    with pytest.raises(DomainError):
        euler_characteristic(SystemConfig.create(2, 1), 1.0, epsilon=1.0)


def test_reduced_metric():
    config = SystemConfig.create(2, 2)
    r = geometry.reduced_metric(config, 0.6)
    m = metric_closed_form(config, ParamPoint(0.6))
    assert (r.g_tt, r.g_xx) == (m.g_tt, m.g_xx)
