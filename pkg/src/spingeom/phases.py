"""Global, dynamical, geometric and Aharonov-Anandan phases of the evolving state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .hilbert import (
    ParamPoint,
    SystemConfig,
    build_initial_state,
    evolution_period,
    evolve,
    hamiltonian_moments,
    overlap,
    pair_energies,
)

ORTHOGONALITY_TOL = 1e-12
_CHUNK_ELEMENTS = 2**21


class UndefinedPhaseError(ValueError):
    """Raised when the initial and evolved states are (nearly) orthogonal."""


def wrap_phase(angle):
    """Reduce to ``(-pi, pi]``."""
    wrapped = np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2 * np.pi)
    return float(wrapped) if wrapped.ndim == 0 else wrapped


@dataclass(frozen=True)
class PhaseBreakdown:
    global_phase: float
    dynamical_phase: float
    geometric_phase: float

    def __post_init__(self):
        residual = wrap_phase(self.global_phase - self.dynamical_phase - self.geometric_phase)
        if abs(residual) > 1e-12:
            raise ValueError(f"phase decomposition violated by {residual!r}")


def _mean_pair_energy(config: SystemConfig, theta) -> float:
    # <H>/J = s^2 N (N-1) cos^2(theta) for the coherent product state.
    return config.s**2 * config.n_spins * (config.n_spins - 1) * np.cos(theta) ** 2


def initial_overlap(config: SystemConfig, point: ParamPoint) -> complex:
    psi0 = build_initial_state(config, point.theta, point.phi)
    return overlap(psi0, evolve(psi0, point.xi))


def global_phase(config: SystemConfig, point: ParamPoint) -> float:
    """Principal ``arg <Psi_i|Psi(xi)>`` from the two-argument arctangent."""
    amp = initial_overlap(config, point)
    if abs(amp) < ORTHOGONALITY_TOL:
        raise UndefinedPhaseError(f"|<Psi_i|Psi(xi)>| = {abs(amp):.3g}: phase undefined")
    return float(np.arctan2(amp.imag, amp.real))


def dynamical_phase(config: SystemConfig, point: ParamPoint) -> float:
    """``-xi s^2 N (N-1) cos^2(theta)``; not reduced modulo 2 pi."""
    return float(-point.xi * _mean_pair_energy(config, point.theta))


def dynamical_phase_from_energy(config: SystemConfig, point: ParamPoint) -> float:
    """``-<H> t`` with ``<H>`` from the state vector; requires ``J != 0``."""
    if config.coupling == 0:
        raise ValueError("time t = xi / J is undefined for J = 0")
    mean, _ = hamiltonian_moments(build_initial_state(config, point.theta, point.phi))
    return -mean * point.xi / config.coupling


def geometric_phase(config: SystemConfig, point: ParamPoint) -> PhaseBreakdown:
    glob = global_phase(config, point)
    dyn = dynamical_phase(config, point)
    return PhaseBreakdown(glob, dyn, wrap_phase(glob - dyn))


def geometric_phase_short_time(config: SystemConfig, point: ParamPoint) -> float:
    """Second-order short-time form of the geometric phase (single-argument arctan)."""
    n, s, xi, theta = config.n_spins, config.s, point.xi, point.theta
    pairs = s**2 * n * (n - 1)
    cos2 = np.cos(theta) ** 2
    quad = s * (n - 1) * (2 * s * n * cos2**2 + np.sin(2 * theta) ** 2) + np.sin(theta) ** 4
    numerator = 4 * xi * pairs * cos2
    denominator = 4 - xi**2 * pairs * quad
    return float(-np.arctan(numerator / denominator) + xi * pairs * cos2)


def short_time_global_term(config: SystemConfig, point: ParamPoint) -> float:
    """The arctan (global-phase) part of :func:`geometric_phase_short_time`."""
    return geometric_phase_short_time(config, point) + dynamical_phase(config, point)


def phase_series(config: SystemConfig, theta: float, phi: float, xis, unwrap: bool = False) -> dict:
    """Phases along a ``xi`` grid; ``unwrap`` gives nearest-branch continuous curves."""
    xis = np.asarray(xis, dtype=float)
    rows = [geometric_phase(config, ParamPoint(theta, phi, x)) for x in xis]
    glob = np.array([r.global_phase for r in rows])
    geo = np.array([r.geometric_phase for r in rows])
    if unwrap:
        glob, geo = np.unwrap(glob), np.unwrap(geo)
    return {
        "xi": xis,
        "global_phase": glob,
        "dynamical_phase": np.array([r.dynamical_phase for r in rows]),
        "geometric_phase": geo,
    }


def is_cyclic(config: SystemConfig, xi_max: float, tol: float = 1e-12) -> bool:
    """True when ``xi_max`` is a whole number of ray periods."""
    period = evolution_period(config)
    k = round(xi_max / period)
    return k >= 1 and abs(xi_max - k * period) <= tol * max(1.0, xi_max)


def aa_phase(config: SystemConfig, theta: float, xi_max: float | None = None) -> float:
    """Cyclic phase ``xi_max N (N-1) s^2 cos^2(theta)`` (unreduced).

    ``xi_max`` defaults to one period of the ray (``2 pi`` for half-integer
    spin, ``pi`` for integer spin). Use :func:`is_cyclic` to flag open paths.
    """
    if xi_max is None:
        xi_max = evolution_period(config)
    return float(xi_max * _mean_pair_energy(config, theta))


def aa_phase_numeric(config: SystemConfig, theta: float, xi_max: float | None = None, phi: float = 0.0,
                     n_steps: int = 10_000, fd_step: float = 1e-4, tol: float = 1e-8,
                     max_steps: int = 160_000) -> float:
    """Trapezoid integral of the connection ``i <Psi|d_xi Psi>`` along the path.

    The tangent is a five-point central difference of evolved state vectors. The step
    count doubles until halving changes the integral by less than ``tol``.
    """
    if xi_max is None:
        xi_max = evolution_period(config)
    amps = build_initial_state(config, theta, phi).amplitudes
    energies = pair_energies(config)

    chunk = max(1, _CHUNK_ELEMENTS // energies.size)

    def connection(xis):
        out = np.empty(xis.size)
        for start in range(0, xis.size, chunk):
            x = xis[start:start + chunk, None]
            def state(shift):
                return amps * np.exp(-1j * (x + shift * fd_step) * energies)

            psi = state(0)
            tangent = (state(-2) - 8 * state(-1) + 8 * state(1) - state(2)) / (12 * fd_step)
            out[start:start + chunk] = (1j * np.sum(psi.conj() * tangent, axis=1)).real
        return out

    def integrate(steps):
        grid = np.linspace(0.0, xi_max, steps + 1)
        return float(trapezoid(connection(grid), grid))

    steps = n_steps
    value = integrate(steps)
    while steps < max_steps:
        steps *= 2
        refined = integrate(steps)
        if abs(refined - value) < tol:
            return refined
        value = refined
    return value
