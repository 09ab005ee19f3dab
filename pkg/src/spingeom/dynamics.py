"""Evolution speed, distance along the evolution circle and the brachistochrone."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import mpmath
import numpy as np

from .geometry import DegenerateManifoldError, g_xx_closed_form
from .hilbert import SystemConfig, build_initial_state, hamiltonian_moments, pair_energies


@dataclass(frozen=True)
class BrachistochroneSolution:
    theta_max: float
    v_max: float
    s_min: float
    tau: float
    ratio_tau_over_t: float
    xi: float
    t: float

    def to_dict(self) -> dict:
        return asdict(self)


def _require_interacting(config: SystemConfig):
    if config.n_spins < 2:
        raise DegenerateManifoldError("N = 1 does not evolve: speed and distance are identically zero")


def _interaction_factor(config: SystemConfig) -> float:
    return 4 * config.s * (config.n_spins - 1) - 1


def speed(config: SystemConfig, theta):
    """``V = J sqrt(g_xx)`` -- equal to the energy uncertainty with hbar = 1."""
    _require_interacting(config)
    v = abs(config.coupling) * np.sqrt(g_xx_closed_form(config, np.asarray(theta, dtype=float)))
    return float(v) if np.ndim(v) == 0 else v


def speed_from_uncertainty(config: SystemConfig, theta: float, phi: float = 0.0) -> float:
    """``Delta E`` of the state vector; the independent route to :func:`speed`."""
    _, variance = hamiltonian_moments(build_initial_state(config, theta, phi))
    return float(np.sqrt(max(variance, 0.0)))


def maximize_speed(config: SystemConfig) -> tuple[float, float]:
    """Closed-form maximiser ``(theta_max, v_max)`` with ``theta_max`` in ``(0, pi/2]``."""
    _require_interacting(config)
    n, s, a = config.n_spins, config.s, _interaction_factor(config)
    sin2 = 2 * s * (n - 1) / a
    theta_max = np.pi / 2 if sin2 >= 1 else float(np.arcsin(np.sqrt(sin2)))
    v_max = abs(config.coupling) * s**2 * (n - 1) * np.sqrt(2 * n * (n - 1) / a)
    return theta_max, float(v_max)


def maximize_speed_numeric(config: SystemConfig, tol: float = 1e-12, dps: int = 40) -> tuple[float, float]:
    """Golden-section search for the speed maximum on ``[0, pi/2]``.

    ``V^2`` is unimodal there (it is concave in ``sin^2 theta``); the speed is
    symmetric about ``pi/2``. The search runs in extended precision so the
    flat top of the objective does not limit the accuracy in ``theta``.
    """
    _require_interacting(config)
    n, s, a = config.n_spins, config.s, _interaction_factor(config)
    with mpmath.workdps(dps):
        def objective(t):
            sin2 = mpmath.sin(t) ** 2
            return sin2 * (1 + a * (1 - sin2))

        invphi = (mpmath.sqrt(5) - 1) / 2
        lo, hi = mpmath.mpf(0), mpmath.pi / 2
        c, d = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
        fc, fd = objective(c), objective(d)
        while hi - lo > tol:
            if fc < fd:
                lo, c, fc = c, d, fd
                d = lo + invphi * (hi - lo)
                fd = objective(d)
            else:
                hi, d, fd = d, c, fc
                c = hi - invphi * (hi - lo)
                fc = objective(c)
        theta = (lo + hi) / 2
        v = abs(config.coupling) * s * mpmath.sqrt(n * (n - 1) * objective(theta) / 2)
        return float(theta), float(v)


def maximize_speed_grid(config: SystemConfig, count: int = 10_000) -> tuple[float, float]:
    """Brute-force maximum over an even grid of ``theta`` in ``[0, pi/2]``."""
    thetas = np.linspace(0.0, np.pi / 2, count)
    v = speed(config, thetas)
    k = int(np.argmax(v))
    return float(thetas[k]), float(v[k])


def geodesic_distance(config: SystemConfig, theta, xi):
    """Length ``sqrt(g_xx) xi`` of the evolution circle traced up to ``xi``.

    This is the path length along the orbit, not necessarily the shortest
    Fubini-Study distance between its end points.
    """
    _require_interacting(config)
    if np.any(np.asarray(xi) < 0):
        raise ValueError("xi must be >= 0")
    d = np.sqrt(g_xx_closed_form(config, np.asarray(theta, dtype=float))) * np.asarray(xi, dtype=float)
    return float(d) if np.ndim(d) == 0 else d


def path_length_numeric(config: SystemConfig, theta: float, xi: float, steps: int = 4096,
                        phi: float = 0.0) -> float:
    """Sum of Fubini-Study angles ``arccos |<Psi_k|Psi_k+1>|`` along a fine ``xi`` grid."""
    if xi == 0:
        return 0.0
    probs = np.abs(build_initial_state(config, theta, phi).amplitudes) ** 2
    levels, inverse = np.unique(pair_energies(config), return_inverse=True)
    weights = np.bincount(inverse, weights=probs)
    dxi = xi / steps
    # The orbit is a one-parameter group, so every step has the same overlap
    # |<Psi_0|exp(-i H dxi / J)|Psi_0>|; 1 - |overlap|^2 is summed in the
    # cancellation-free form sum_ij p_i p_j 2 sin^2((E_i - E_j) dxi / 2).
    gaps = levels[:, None] - levels[None, :]
    infidelity = float(weights @ (2 * np.sin(gaps * dxi / 2) ** 2) @ weights)
    return float(steps * np.arcsin(np.sqrt(min(max(infidelity, 0.0), 1.0))))


def minimal_distance(config: SystemConfig, xi: float) -> float:
    """``S_min = s sqrt(xi^2 N (N - 1) / 2)``, the distance at ``theta = pi/2``."""
    _require_interacting(config)
    n = config.n_spins
    return float(config.s * np.sqrt(xi**2 * n * (n - 1) / 2))


def optimal_time_ratio(config: SystemConfig) -> float:
    """``tau / t = sqrt(4 s (N - 1) - 1) / (2 s (N - 1))``."""
    _require_interacting(config)
    return float(np.sqrt(_interaction_factor(config)) / (2 * config.s * (config.n_spins - 1)))


def brachistochrone(config: SystemConfig, xi: float, trivial: bool = False) -> BrachistochroneSolution:
    """Optimal time ``tau = S_min / V_max`` to traverse the evolution circle.

    With ``trivial=True`` both distance and speed are taken at ``theta = pi/2``,
    which always yields ``tau = t``.
    """
    _require_interacting(config)
    if config.coupling <= 0:
        raise ValueError(f"the brachistochrone needs J > 0, got {config.coupling}")
    if not (np.isfinite(xi) and xi > 0):
        raise ValueError(f"xi must be positive, got {xi}")
    s_min = minimal_distance(config, xi)
    if trivial:
        theta_max, v_max = np.pi / 2, speed(config, np.pi / 2)
    else:
        theta_max, v_max = maximize_speed(config)
    tau = s_min / v_max
    t = xi / config.coupling
    return BrachistochroneSolution(
        theta_max=float(theta_max), v_max=float(v_max), s_min=s_min, tau=float(tau),
        ratio_tau_over_t=float(tau / t), xi=float(xi), t=float(t),
    )
