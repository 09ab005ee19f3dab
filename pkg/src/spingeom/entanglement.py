"""Entanglement of two interacting spins: I-concurrence and concurrence-parametrized geometry.

The short-time concurrence ``C = 2 xi s sin^2(theta)`` turns the ``(theta, xi)``
quantities of the two-spin system into functions of ``(C, xi)``. Throughout,
``r = tilde_xi C / C_max`` with ``tilde_xi = xi'_max / xi`` and
``C_max = 2 s xi'_max``; note that ``r = C / (2 s xi)`` plays the role of
``sin^2(theta)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    PureState,
    SpinValue,
    SystemConfig,
    as_spin,
    build_initial_state,
    evolve,
    partial_trace,
    purity,
)

DEFAULT_XI_PRIME_MAX = 1e-3


class DegenerateMetricError(ValueError):
    """Raised where the concurrence-parametrized metric has a pole."""


def two_spin_state(spin, theta: float, phi: float, xi: float) -> PureState:
    config = SystemConfig(2, as_spin(spin))
    return evolve(build_initial_state(config, theta, phi), xi)


def iconcurrence_from_state(state: PureState) -> float:
    """``sqrt(2 (1 - Tr rho_1^2))`` from the 2x2 minors of the coefficient matrix.

    ``1 - Tr rho_1^2 = (1/2) sum_ijkl |M_ik M_jl - M_il M_jk|^2`` for the
    normalized ``d x d`` amplitude matrix ``M``. Every term is non-negative,
    so weakly entangled states do not lose precision to cancellation.
    """
    if state.config.n_spins != 2:
        raise ValueError("I-concurrence is defined here for two spins")
    m = state.tensor()
    minors = np.einsum("ik,jl->ijkl", m, m) - np.einsum("il,jk->ijkl", m, m)
    return float(np.sqrt(np.sum(np.abs(minors) ** 2)))


def iconcurrence_from_purity(state: PureState, keep: int = 1) -> float:
    """``sqrt(2 (1 - Tr rho_k^2))`` via the reduced density matrix of spin ``keep``."""
    return float(np.sqrt(max(2 * (1 - purity(partial_trace(state, keep))), 0.0)))


def iconcurrence_exact(spin, theta: float, phi: float, xi: float) -> float:
    return iconcurrence_from_state(two_spin_state(spin, theta, phi, xi))


def iconcurrence_short_time(spin, theta, xi):
    """Leading-order concurrence ``2 xi s sin^2(theta)``."""
    c = 2 * np.asarray(xi, dtype=float) * as_spin(spin).s * np.sin(theta) ** 2
    return float(c) if np.ndim(c) == 0 else c


def short_time_error_constant(spin, theta: float, xis, phi: float = 0.0) -> float:
    """Empirical ``kappa = max |C_exact - C_short| / xi^2`` over the given ``xi`` values."""
    xis = np.asarray(xis, dtype=float)
    if np.any(xis <= 0):
        raise ValueError("xi values must be positive")
    errors = [abs(iconcurrence_exact(spin, theta, phi, x) - iconcurrence_short_time(spin, theta, x)) for x in xis]
    return float(np.max(np.array(errors) / xis**2))


@dataclass(frozen=True)
class ConcurrenceContext:
    """Evaluation point ``(C, xi)`` for the concurrence-parametrized formulas."""

    spin: SpinValue
    xi: float
    xi_prime_max: float = DEFAULT_XI_PRIME_MAX
    c: float = 0.0
    coupling: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "spin", as_spin(self.spin))
        if not (np.isfinite(self.xi) and self.xi > 0):
            raise ValueError(f"xi must be positive, got {self.xi}")
        if not (np.isfinite(self.xi_prime_max) and self.xi_prime_max > 0):
            raise ValueError(f"xi_prime_max must be positive, got {self.xi_prime_max}")
        if not np.isfinite(self.c) or self.c < 0 or self.c > self.c_max * (1 + 1e-12):
            raise ValueError(f"c must lie in [0, c_max = {self.c_max}], got {self.c}")
        for name in ("xi", "xi_prime_max", "c", "coupling"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_theta(cls, spin, theta: float, xi: float, coupling: float = 1.0) -> "ConcurrenceContext":
        """Context with ``xi'_max = xi`` and ``C = 2 xi s sin^2(theta)``."""
        spin = as_spin(spin)
        c = min(iconcurrence_short_time(spin, theta, xi), 2 * spin.s * xi)
        return cls(spin, xi, xi, c, coupling)

    @property
    def s(self) -> float:
        return self.spin.s

    @property
    def c_max(self) -> float:
        return 2 * self.spin.s * self.xi_prime_max

    @property
    def tilde_xi(self) -> float:
        return self.xi_prime_max / self.xi

    @property
    def ratio(self) -> float:
        """``tilde_xi C / C_max``."""
        return self.tilde_xi * self.c / self.c_max

    def with_c(self, c: float) -> "ConcurrenceContext":
        return ConcurrenceContext(self.spin, self.xi, self.xi_prime_max, c, self.coupling)


@dataclass(frozen=True)
class ConcurrenceMetric:
    """Metric coefficients in ``(C, xi)``; the line element is
    ``g_cc dC^2 + 2 g_cx dC dxi + g_xx dxi^2``."""

    g_cc: float
    g_cx: float
    g_xx: float


def concurrence_metric_coefficients(s, xi, c):
    """``(g_cc, g_cx, g_xx)`` of the two-spin metric in ``(C, xi)``.

    With ``P = s / (2 xi^2 C (2 s xi - C))`` and ``r = C / (2 s xi)``::

        dS^2 = P [ (xi^2/2) dC^2 - xi C dC dxi
                   + (C^2/2 + xi C^2 (2 s xi - C)(1 + (4s - 1)(1 - r))) dxi^2 ]

    Only field arithmetic is used, so the arguments may be floats, fractions
    or extended-precision numbers.
    """
    gap = 2 * s * xi - c
    r = c / (2 * s * xi)
    pref = s / (2 * xi**2 * c * gap)
    g_xx = pref * (c**2 / 2 + xi * c**2 * gap * (1 + (4 * s - 1) * (1 - r)))
    return pref * xi**2 / 2, -pref * xi * c / 2, g_xx


def metric_from_concurrence(ctx: ConcurrenceContext) -> tuple[ConcurrenceMetric, float]:
    """Two-spin metric in ``(C, xi)`` and the fixed-``C`` line element ``g_xx``."""
    s, xi, c = ctx.s, ctx.xi, ctx.c
    if c <= 0 or 2 * s * xi - c <= 0:
        raise DegenerateMetricError(f"C = {c} must lie strictly inside (0, 2 s xi = {2 * s * xi})")
    g_cc, g_cx, g_xx = concurrence_metric_coefficients(s, xi, c)
    return ConcurrenceMetric(g_cc=g_cc, g_cx=g_cx, g_xx=g_xx), g_xx


def pullback_to_theta(metric: ConcurrenceMetric, spin, theta: float, xi: float) -> np.ndarray:
    """Pull a ``(C, xi)`` metric back to ``(theta, xi)`` along ``C = 2 xi s sin^2(theta)``.

    The ``dxi^2`` entry cancels terms of order ``1/xi^2``; for small ``xi``
    evaluate the coefficients in extended precision instead.
    """
    s = as_spin(spin).s
    jac = np.array([[4 * xi * s * np.sin(theta) * np.cos(theta), 2 * s * np.sin(theta) ** 2], [0.0, 1.0]])
    g = np.array([[metric.g_cc, metric.g_cx], [metric.g_cx, metric.g_xx]])
    return jac.T @ g @ jac


def _curvature_of_ratio(s: float, r):
    a = 4 * s - 1
    q = a * (1 - np.asarray(r, dtype=float))
    k = 2 / s * (2 - (q + 2 * s + 1) / (q + 1) ** 2)
    return float(k) if np.ndim(k) == 0 else k


def curvature_from_concurrence(ctx: ConcurrenceContext) -> float:
    return _curvature_of_ratio(ctx.s, ctx.ratio)


def k_max(spin) -> float:
    """Curvature of the separable states, ``(2/s)(2 - 3/(8s))``."""
    s = as_spin(spin).s
    return 2 / s * (2 - 3 / (8 * s))


def k_min(spin, tilde_xi: float) -> float:
    """Curvature at ``C = C_max``."""
    return _curvature_of_ratio(as_spin(spin).s, tilde_xi)


def phase_from_concurrence(ctx: ConcurrenceContext) -> float:
    """Short-time geometric phase in terms of the concurrence.

    ``2 xi s^2 (1 - r) - arctan(4 xi s^2 (1 - r) / (2 - xi^2 s^2 (2s - (2s - 1) r)^2))``
    """
    s, xi, r = ctx.s, ctx.xi, ctx.ratio
    lead = 2 * xi * s**2 * (1 - r)
    denominator = 2 - xi**2 * s**2 * (2 * s - (2 * s - 1) * r) ** 2
    return float(lead - np.arctan(2 * lead / denominator))


def speed_from_concurrence(ctx: ConcurrenceContext) -> float:
    """``V = J s sqrt(r (4s - (4s - 1) r))``."""
    s, r = ctx.s, ctx.ratio
    return float(ctx.coupling * s * np.sqrt(max(r * (4 * s - (4 * s - 1) * r), 0.0)))


def critical_c(spin, tilde_xi: float, c_max: float) -> float:
    """Concurrence of maximal speed, ``2 s C_max / ((4s - 1) tilde_xi)``, capped at ``C_max``."""
    s = as_spin(spin).s
    return float(min(2 * s * c_max / ((4 * s - 1) * tilde_xi), c_max))


def v_max_two_spin(spin, coupling: float = 1.0) -> float:
    s = as_spin(spin).s
    return float(2 * coupling * s**2 / np.sqrt(4 * s - 1))


def distance_from_concurrence(ctx: ConcurrenceContext) -> float:
    """``S = s sqrt(xi'_max xi (C / C_max)(4s - (4s - 1) r))``."""
    s, r = ctx.s, ctx.ratio
    value = ctx.xi_prime_max * ctx.xi * (ctx.c / ctx.c_max) * (4 * s - (4 * s - 1) * r)
    return float(s * np.sqrt(max(value, 0.0)))


def distance_and_time_from_concurrence(ctx: ConcurrenceContext) -> tuple[float, float]:
    """Distance and optimal time ``tau_C = S / V_max``."""
    if ctx.coupling <= 0:
        raise ValueError(f"the optimal time needs J > 0, got {ctx.coupling}")
    distance = distance_from_concurrence(ctx)
    return distance, distance / v_max_two_spin(ctx.spin, ctx.coupling)


def optimal_time_from_concurrence(ctx: ConcurrenceContext) -> float:
    """Closed form ``(1 / (2 J s)) sqrt(xi'_max xi (C/C_max)(4s - 1)(4s - (4s - 1) r))``."""
    if ctx.coupling <= 0:
        raise ValueError(f"the optimal time needs J > 0, got {ctx.coupling}")
    s, r = ctx.s, ctx.ratio
    value = ctx.xi_prime_max * ctx.xi * (ctx.c / ctx.c_max) * (4 * s - 1) * (4 * s - (4 * s - 1) * r)
    return float(np.sqrt(max(value, 0.0)) / (2 * ctx.coupling * s))
