"""Fubini-Study metric, Gaussian curvature and Gauss-Bonnet topology.

The manifold is swept by the evolving coherent state ``|Psi(theta, phi, xi)>``.
Closed forms are checked against finite-difference oracles built directly on
state vectors (metric) or on the closed-form metric (curvature).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import ParamPoint, SystemConfig, build_initial_state, evolve

METRIC_STEP = 1e-5
CURVATURE_STEP = 1e-3
GAUSS_BONNET_EPSILON = 1e-3


class DomainError(ValueError):
    """Raised when a point lies outside an operation's domain."""


class SingularityError(DomainError):
    """Raised at the conical singularities ``theta in {0, pi}``."""


class DegenerateManifoldError(ValueError):
    """Raised for N = 1, where the evolution direction has zero length."""


@dataclass(frozen=True)
class MetricTensor3:
    """Independent components of the metric in ``(theta, phi, xi)``.

    The mixed components ``g_tp`` and ``g_tx`` vanish identically for this
    family; they are kept so numeric estimates can report their residuals.
    """

    g_tt: float
    g_pp: float
    g_xx: float
    g_px: float
    g_tp: float = 0.0
    g_tx: float = 0.0

    def as_matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.g_tt, self.g_tp, self.g_tx],
                [self.g_tp, self.g_pp, self.g_px],
                [self.g_tx, self.g_px, self.g_xx],
            ]
        )

    def components(self) -> dict:
        return {"g_tt": self.g_tt, "g_pp": self.g_pp, "g_xx": self.g_xx, "g_px": self.g_px}


@dataclass(frozen=True)
class MetricTensor2:
    """Reduced ``(theta, xi)`` metric."""

    g_tt: float
    g_xx: float


@dataclass(frozen=True)
class TopologyReport:
    bulk_integral: float
    defect_sum: float
    euler_characteristic: float
    bulk_closed_form: float
    epsilon: float
    xi_max: float


def _interaction_factor(config: SystemConfig) -> float:
    # 4 s (N - 1) - 1
    return 4 * config.s * (config.n_spins - 1) - 1


def _require_interacting(config: SystemConfig):
    if config.n_spins < 2:
        raise DegenerateManifoldError("N = 1 has no interaction; the evolving manifold is degenerate")


def g_xx_closed_form(config: SystemConfig, theta):
    n, s = config.n_spins, config.s
    sin2, cos2 = np.sin(theta) ** 2, np.cos(theta) ** 2
    return 0.5 * n * (n - 1) * s**2 * sin2 * (1 + _interaction_factor(config) * cos2)


def metric_closed_form(config: SystemConfig, point: ParamPoint) -> MetricTensor3:
    """Closed-form metric components; independent of ``phi`` and ``xi``.

    ``g_px = N(N-1) s^2 cos(theta) sin^2(theta)`` is the full symmetric
    component, i.e. the line element carries ``2 g_px dphi dxi``.
    """
    n, s, theta = config.n_spins, config.s, point.theta
    return MetricTensor3(
        g_tt=n * s / 2,
        g_pp=n * s / 2 * np.sin(theta) ** 2,
        g_xx=float(g_xx_closed_form(config, theta)),
        g_px=n * (n - 1) * s**2 * np.cos(theta) * np.sin(theta) ** 2,
    )


def reduced_metric(config: SystemConfig, theta: float) -> MetricTensor2:
    return MetricTensor2(g_tt=config.n_spins * config.s / 2, g_xx=float(g_xx_closed_form(config, theta)))


def sphere_metric(config: SystemConfig, theta: float) -> tuple[float, float]:
    """Initial-state sphere of radius ``sqrt(N s / 2)``: ``(g_tt, g_pp)``."""
    radius2 = config.n_spins * config.s / 2
    return radius2, radius2 * np.sin(theta) ** 2


def _amplitudes(config, theta, phi, xi):
    return evolve(build_initial_state(config, theta, phi), xi).amplitudes


def fubini_study_matrix(config: SystemConfig, point: ParamPoint, step: float = METRIC_STEP) -> np.ndarray:
    """Full 3x3 ``Re(<d_a Psi|d_b Psi> - <d_a Psi|Psi><Psi|d_b Psi>)`` by central differences."""
    if step <= 0:
        raise DomainError("step must be positive")
    if not (2 * step <= point.theta <= np.pi - 2 * step):
        raise DomainError(f"theta = {point.theta} too close to a pole for step {step}")
    base = np.array([point.theta, point.phi, point.xi])
    psi = _amplitudes(config, *base)
    tangents = []
    for axis in range(3):
        shift = np.zeros(3)
        shift[axis] = step
        plus = _amplitudes(config, *(base + shift))
        minus = _amplitudes(config, *(base - shift))
        tangents.append((plus - minus) / (2 * step))
    tangents = np.array(tangents)
    gram = tangents.conj() @ tangents.T
    conn = tangents.conj() @ psi
    g = (gram - np.outer(conn, conn.conj())).real
    return g


def metric_numeric(config: SystemConfig, point: ParamPoint, step: float = METRIC_STEP) -> MetricTensor3:
    g = fubini_study_matrix(config, point, step)
    return MetricTensor3(
        g_tt=g[0, 0], g_pp=g[1, 1], g_xx=g[2, 2],
        g_px=(g[1, 2] + g[2, 1]) / 2, g_tp=(g[0, 1] + g[1, 0]) / 2, g_tx=(g[0, 2] + g[2, 0]) / 2,
    )


def gaussian_curvature(config: SystemConfig, theta):
    """Closed-form Gaussian curvature of the ``(theta, xi)`` manifold."""
    _require_interacting(config)
    theta_arr = np.asarray(theta, dtype=float)
    if np.any((theta_arr <= 0) | (theta_arr >= np.pi)):
        raise SingularityError("curvature is singular at theta = 0 and theta = pi")
    n, s = config.n_spins, config.s
    a = _interaction_factor(config)
    cos2 = np.cos(theta_arr) ** 2
    k = 4 / (n * s) * (2 - (a * cos2 + 2 * s * (n - 1) + 1) / (a * cos2 + 1) ** 2)
    return float(k) if k.ndim == 0 else k


def _d5(f, x, h):
    # Fourth-order central first derivative.
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def gaussian_curvature_numeric(config: SystemConfig, theta: float, step: float = CURVATURE_STEP,
                               xi: float = 0.0) -> float:
    """Curvature from Christoffel symbols of the closed-form reduced metric.

    Evaluates ``K = [d_xi(sqrt(g_xx/g_tt) G^xi_tt) - d_theta(sqrt(g_xx/g_tt) G^xi_tx)] / sqrt(g_tt g_xx)``
    with ``G^xi_tt = -d_xi g_tt / (2 g_xx)`` and ``G^xi_tx = d_theta g_xx / (2 g_xx)``,
    every derivative taken by finite differences. The stencil reaches
    ``theta +- 4 step``.
    """
    _require_interacting(config)
    if not (4 * step < theta < np.pi - 4 * step):
        raise DomainError(f"theta = {theta} too close to a pole for step {step}")

    def g(th, x):
        m = metric_closed_form(config, ParamPoint(th, 0.0, max(x, 0.0)))
        return m.g_tt, m.g_xx

    def gamma_xi_tx(th, x):
        return _d5(lambda t: g(t, x)[1], th, step) / (2 * g(th, x)[1])

    def gamma_xi_tt(th, x):
        return -_d5(lambda y: g(th, y)[0], x, step) / (2 * g(th, x)[1])

    def weight(th, x):
        g_tt, g_xx = g(th, x)
        return np.sqrt(g_xx / g_tt)

    x0 = xi + 4 * step  # keeps every xi-stencil point non-negative
    d_xi = _d5(lambda y: weight(theta, y) * gamma_xi_tt(theta, y), x0, step)
    d_theta = _d5(lambda t: weight(t, x0) * gamma_xi_tx(t, x0), theta, step)
    g_tt, g_xx = g(theta, x0)
    return float((d_xi - d_theta) / np.sqrt(g_tt * g_xx))


def max_curvature_two_spin(spin_s: float) -> float:
    """Limit of the N = 2 curvature at the poles: ``(2/s)(2 - 3/(8s))``."""
    return 2 / spin_s * (2 - 3 / (8 * spin_s))


def angular_defect(config: SystemConfig, xi_max: float) -> float:
    """Conical-defect contribution of both poles, ``2 [2 pi - 2 s xi_max (N - 1)]``."""
    return 2 * (2 * np.pi - 2 * config.s * xi_max * (config.n_spins - 1))


def bulk_closed_form(config: SystemConfig, xi_max: float) -> float:
    return 4 * config.s * xi_max * (config.n_spins - 1)


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n + 1)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    return w * h / 3


def _simpson_2d(f, a: float, b: float, c: float, d: float, n: int) -> float:
    t = np.linspace(a, b, n + 1)
    x = np.linspace(c, d, n + 1)
    wt = _simpson_weights(n, (b - a) / n)
    wx = _simpson_weights(n, (d - c) / n)
    values = f(t[:, None], x[None, :])
    return float(wt @ values @ wx)


def bulk_curvature_integral(config: SystemConfig, xi_max: float, epsilon: float,
                            tol: float = 1e-6, n_start: int = 512, n_max: int = 4096) -> float:
    """``int K sqrt(g_tt g_xx) dtheta dxi`` over ``[eps, pi - eps] x [0, xi_max]``.

    Composite Simpson on a tensor grid, refined by doubling with a Richardson
    correction until successive corrected estimates differ by less than ``tol``.
    """
    g_tt = config.n_spins * config.s / 2

    def integrand(theta, xi):
        area = np.sqrt(g_tt * g_xx_closed_form(config, theta))
        return gaussian_curvature(config, theta) * area * np.ones_like(xi)

    n = n_start
    coarse = _simpson_2d(integrand, epsilon, np.pi - epsilon, 0.0, xi_max, n)
    previous = None
    while True:
        n *= 2
        fine = _simpson_2d(integrand, epsilon, np.pi - epsilon, 0.0, xi_max, n)
        estimate = fine + (fine - coarse) / 15
        if previous is not None and abs(estimate - previous) < tol:
            return estimate
        if n >= n_max:
            return estimate
        previous, coarse = estimate, fine


def euler_characteristic(config: SystemConfig, xi_max: float,
                         epsilon: float = GAUSS_BONNET_EPSILON) -> TopologyReport:
    """Gauss-Bonnet: ``chi = (bulk + defect) / (2 pi)``."""
    _require_interacting(config)
    if not (np.isfinite(xi_max) and xi_max > 0):
        raise DomainError(f"xi_max must be positive, got {xi_max}")
    if not (0 < epsilon < np.pi / 4):
        raise DomainError(f"epsilon must lie in (0, pi/4), got {epsilon}")
    bulk = bulk_curvature_integral(config, xi_max, epsilon)
    defect = angular_defect(config, xi_max)
    return TopologyReport(
        bulk_integral=bulk,
        defect_sum=defect,
        euler_characteristic=(bulk + defect) / (2 * np.pi),
        bulk_closed_form=bulk_closed_form(config, xi_max),
        epsilon=epsilon,
        xi_max=xi_max,
    )
