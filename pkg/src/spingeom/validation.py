"""Oracle-equivalence battery behind ``spingeom validate``.

Every check compares a closed form against an independent numeric route on a
pinned grid and reports its worst-case error against a fixed tolerance. The
battery is deterministic: no random draws and no timings in the report.
Functions are looked up through their modules at call time so a tampered
implementation is caught.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from . import dynamics, entanglement, geometry, hilbert, phases, sweep
from ._validation import metric_relative_error, relative_error

ACCEPTANCE_CONFIGS = ((2, 1), (2, 2), (3, 1), (3, 2), (4, 1))
SHORT_TIME_PHASE_MIN_ORDER = 2.95


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tolerance: float
    passed: bool
    kind: str = "error"  # "error": worst <= tolerance; "order": worst >= tolerance
    detail: str = ""

    def line(self) -> str:
        label = "worst" if self.kind == "error" else "min order"
        sign = "<=" if self.kind == "error" else ">="
        status = "PASS" if self.passed else "FAIL"
        line = f"{status}  {self.name:<24} {label}={self.worst:.3e}  ({sign} {self.tolerance:.3g})"
        return f"{line}  {self.detail}" if self.detail else line


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def render(self) -> str:
        lines = [c.line() for c in self.checks]
        total = len(self.checks)
        ok = total - len(self.failed())
        lines.append(f"{ok}/{total} checks passed")
        return "\n".join(lines) + "\n"


def _error(name, worst, tol) -> CheckResult:
    worst = float(worst)
    return CheckResult(name, worst, tol, bool(np.isfinite(worst) and worst <= tol))


def _order(name, worst, tol) -> CheckResult:
    worst = float(worst)
    return CheckResult(name, worst, tol, bool(np.isfinite(worst) and worst >= tol), kind="order")


def _configs():
    return [hilbert.SystemConfig.create(n, ts) for n, ts in ACCEPTANCE_CONFIGS]


def check_metric(n_theta=20, n_xi=8) -> CheckResult:
    worst = 0.0
    for cfg in _configs():
        for theta in np.linspace(0.1, np.pi - 0.1, n_theta):
            for xi in np.linspace(0.0, 2 * np.pi, n_xi):
                point = hilbert.ParamPoint(theta, 0.37, xi)
                numeric = geometry.metric_numeric(cfg, point).as_matrix()
                closed = geometry.metric_closed_form(cfg, point).as_matrix()
                worst = max(worst, metric_relative_error(numeric, closed))
    return _error("metric", worst, 1e-6)


def check_curvature(n_theta=20) -> CheckResult:
    worst = 0.0
    for cfg in _configs():
        thetas = np.linspace(0.1, np.pi - 0.1, n_theta)
        closed = geometry.gaussian_curvature(cfg, thetas)
        numeric = np.array([geometry.gaussian_curvature_numeric(cfg, t) for t in thetas])
        worst = max(worst, float(np.max(relative_error(numeric, closed))))
    # negative curvature must occur for N = 3, s = 1
    k = geometry.gaussian_curvature(hilbert.SystemConfig.create(3, 2), np.linspace(0.05, np.pi - 0.05, 400))
    if not np.any(k < 0):
        worst = np.inf
    return _error("curvature", worst, 1e-4)


def check_topology() -> CheckResult:
    worst = 0.0
    for n, ts, xi_max in ((2, 1, np.pi), (3, 2, 1.0), (4, 1, 2.0), (2, 3, 0.5)):
        cfg = hilbert.SystemConfig.create(n, ts)
        for eps in (1e-2, 1e-3, 1e-4):
            chi = geometry.euler_characteristic(cfg, xi_max, eps).euler_characteristic
            worst = max(worst, abs(chi - 2))
    return _error("topology", worst, 1e-2)


def _phase_points():
    for cfg in _configs():
        for theta in (0.0, 0.4, np.pi / 3, 1.3, np.pi / 2, 2.5):
            for xi in (0.0, 0.3, 1.1, 2.9, 5.0):
                yield cfg, hilbert.ParamPoint(theta, 0.8, xi)


def check_dynamical_phase() -> CheckResult:
    worst = 0.0
    for cfg, point in _phase_points():
        closed = phases.dynamical_phase(cfg, point)
        from_energy = phases.dynamical_phase_from_energy(cfg, point)
        worst = max(worst, abs(closed - from_energy) / max(1.0, abs(from_energy)))
    return _error("dynamical_phase", worst, 1e-12)


def check_phase_decomposition() -> CheckResult:
    worst = 0.0
    for cfg, point in _phase_points():
        try:
            b = phases.geometric_phase(cfg, point)
        except phases.UndefinedPhaseError:
            continue
        worst = max(worst, abs(phases.wrap_phase(b.global_phase - b.dynamical_phase - b.geometric_phase)))
    return _error("phase_decomposition", worst, 1e-12)


def short_time_phase_order(cfg, theta, xis=(1e-1, 1e-2, 1e-3)) -> float:
    """Least-squares slope of ``log |short - exact|`` against ``log xi``."""
    errors = []
    for xi in xis:
        point = hilbert.ParamPoint(theta, 0.0, xi)
        exact = phases.geometric_phase(cfg, point).geometric_phase
        errors.append(abs(phases.wrap_phase(phases.geometric_phase_short_time(cfg, point) - exact)))
    return float(np.polyfit(np.log(xis), np.log(errors), 1)[0])


def check_short_time_phase() -> CheckResult:
    # The asymptotic order is exactly 3; the fitted slope carries O(xi) bias
    # from the xi = 0.1 point, hence the 0.05 allowance.
    orders = [short_time_phase_order(cfg, theta) for cfg in _configs() for theta in (0.5, np.pi / 3, 1.2)]
    return _order("short_time_phase", min(orders), SHORT_TIME_PHASE_MIN_ORDER)


def check_aa_phase() -> CheckResult:
    worst = 0.0
    for cfg in (hilbert.SystemConfig.create(2, 1), hilbert.SystemConfig.create(3, 2), hilbert.SystemConfig.create(3, 1)):
        for theta in (0.0, 0.7, np.pi / 2):
            closed = phases.aa_phase(cfg, theta)
            worst = max(worst, abs(closed - phases.aa_phase_numeric(cfg, theta)))
    return _error("aa_phase", worst, 1e-6)


def check_speed_uncertainty() -> CheckResult:
    worst = 0.0
    for n, ts in ACCEPTANCE_CONFIGS + ((3, 3), (5, 1)):
        for coupling in (1.0, 0.7):
            cfg = hilbert.SystemConfig.create(n, ts, coupling)
            for theta in np.linspace(0.0, np.pi, 13):
                v = dynamics.speed(cfg, theta)
                de = dynamics.speed_from_uncertainty(cfg, theta)
                worst = max(worst, abs(v - de) / max(abs(de), 1.0))
    return _error("speed_uncertainty", worst, 1e-9)


def check_brachistochrone() -> CheckResult:
    worst = 0.0
    for n, ts in ACCEPTANCE_CONFIGS + ((8, 1), (3, 3)):
        cfg = hilbert.SystemConfig.create(n, ts)
        sol = dynamics.brachistochrone(cfg, 1.0)
        quotient = dynamics.minimal_distance(cfg, 1.0) / dynamics.maximize_speed(cfg)[1]
        worst = max(worst, abs(sol.ratio_tau_over_t - dynamics.optimal_time_ratio(cfg)), abs(sol.tau - quotient))
    ratio = [dynamics.optimal_time_ratio(hilbert.SystemConfig.create(n, 1, max_dim=None)) for n in (2, 8, 32, 128)]
    ratio_s = [dynamics.optimal_time_ratio(hilbert.SystemConfig.create(3, ts)) for ts in (1, 2, 3, 4, 6)]
    if ratio[0] != 1.0 or np.any(np.diff(ratio) >= 0) or np.any(np.diff(ratio_s) >= 0):
        worst = np.inf
    return _error("brachistochrone", worst, 1e-12)


def check_speed_maximizer() -> CheckResult:
    worst = 0.0
    for n, ts in ACCEPTANCE_CONFIGS + ((8, 1), (3, 3)):
        cfg = hilbert.SystemConfig.create(n, ts)
        theta_closed, v_closed = dynamics.maximize_speed(cfg)
        theta_num, v_num = dynamics.maximize_speed_numeric(cfg)
        worst = max(worst, abs(theta_num - theta_closed), abs(v_num - v_closed) / v_closed)
    return _error("speed_maximizer", worst, 1e-8)


def check_two_qubit_concurrence() -> CheckResult:
    worst = 0.0
    for xi in np.linspace(0.0, 2 * np.pi, 41):
        worst = max(worst, abs(entanglement.iconcurrence_exact(1, np.pi / 2, 0.0, xi) - abs(np.sin(xi))))
    return _error("two_qubit_concurrence", worst, 1e-12)


def check_short_time_concurrence() -> CheckResult:
    orders = []
    xis = np.array([4e-2, 2e-2, 1e-2, 5e-3])
    for ts in range(1, 7):
        for theta in (0.4, 1.0, np.pi / 2):
            err = [abs(entanglement.iconcurrence_exact(ts, theta, 0.3, x)
                       - entanglement.iconcurrence_short_time(ts, theta, x)) for x in xis]
            orders.append(np.polyfit(np.log(xis), np.log(err), 1)[0])
    return _order("short_time_concurrence", min(orders), 2.0)


def substitution_errors(spin, theta: float, xi: float) -> dict:
    """Errors of every concurrence-parametrized formula against its angle form."""
    spin = hilbert.as_spin(spin)
    cfg = hilbert.SystemConfig(2, spin)
    ctx = entanglement.ConcurrenceContext.from_theta(spin, theta, xi)
    point = hilbert.ParamPoint(theta, 0.0, xi)
    with mpmath.workdps(40):
        s, x, t = mpmath.mpf(spin.twice_spin) / 2, mpmath.mpf(xi), mpmath.mpf(theta)
        c = 2 * x * s * mpmath.sin(t) ** 2
        g_cc, g_cx, g_xx = entanglement.concurrence_metric_coefficients(s, x, c)
        c_t, c_x = 4 * x * s * mpmath.sin(t) * mpmath.cos(t), 2 * s * mpmath.sin(t) ** 2
        pulled = np.array([
            [float(g_cc * c_t**2), float(c_t * (g_cc * c_x + g_cx))],
            [float(c_t * (g_cc * c_x + g_cx)), float(g_cc * c_x**2 + 2 * g_cx * c_x + g_xx)],
        ])
    reference = np.array([[cfg.s, 0.0], [0.0, float(geometry.g_xx_closed_form(cfg, theta))]])
    metric, _ = entanglement.metric_from_concurrence(ctx)
    coeff = np.array([metric.g_cc, metric.g_cx, metric.g_xx])
    with mpmath.workdps(40):
        exact = np.array([float(v) for v in entanglement.concurrence_metric_coefficients(
            mpmath.mpf(spin.twice_spin) / 2, mpmath.mpf(xi), mpmath.mpf(ctx.c))])
    distance, tau = entanglement.distance_and_time_from_concurrence(ctx)
    return {
        "metric": metric_relative_error(pulled, reference),
        "metric_float": float(np.max(np.abs(coeff - exact) / np.abs(exact))),
        "curvature": relative_error(entanglement.curvature_from_concurrence(ctx),
                                    geometry.gaussian_curvature(cfg, theta)),
        "phase": abs(entanglement.phase_from_concurrence(ctx) - phases.geometric_phase_short_time(cfg, point)),
        "speed": relative_error(entanglement.speed_from_concurrence(ctx), dynamics.speed(cfg, theta)),
        "distance": relative_error(distance, dynamics.geodesic_distance(cfg, theta, xi)),
        "optimal_time": relative_error(tau, dynamics.geodesic_distance(cfg, theta, xi)
                                       / entanglement.v_max_two_spin(spin)),
        "optimal_time_closed": relative_error(entanglement.optimal_time_from_concurrence(ctx), tau),
    }


def check_substitution() -> CheckResult:
    worst = 0.0
    for ts in (1, 2, 3, 4):
        for theta in np.linspace(0.15, np.pi - 0.15, 7):
            if abs(theta - np.pi / 2) < 1e-9:
                continue  # C = C_max is a pole of the concurrence metric
            for xi in (1e-3, 0.05, 0.4):
                worst = max(worst, max(substitution_errors(ts, theta, xi).values()))
    return _error("substitution", worst, 1e-10)


def figure_endpoint_errors(c_count: int = 101) -> list[float]:
    errs = []
    fig1 = sweep.run_figure("fig1", c_count=c_count)
    # 105 intervals put every critical fraction 2s/(4s-1) = 1, 2/3, 3/5, 4/7 on the grid
    fig3 = sweep.run_figure("fig3", c_count=106)
    fig5 = sweep.run_figure("fig5", c_count=106)
    for ts in sweep.FIGURE_TWICE_SPINS:
        spin = hilbert.SpinValue(ts)
        rows1 = [r for r in fig1.rows if r[2] == ts]
        errs.append(abs(rows1[0][5] - entanglement.k_max(spin)))
        errs.append(abs(rows1[-1][5] - entanglement.k_min(spin, 1.0)))
        xi_p = fig3.metadata["xi_prime_max"]
        c_prime = entanglement.critical_c(spin, 1.0, 2 * spin.s * xi_p)
        rows3 = [r for r in fig3.rows if r[2] == ts]
        peak = max(rows3, key=lambda r: r[5])
        errs.append(abs(peak[3] - c_prime))
        errs.append(abs(peak[5] - entanglement.v_max_two_spin(spin)))
        rows5 = [r for r in fig5.rows if r[2] == ts]
        errs.append(abs(rows5[0][5]))
        at_prime = min(rows5, key=lambda r: abs(r[3] - c_prime))
        errs.append(abs(at_prime[5] - xi_p))  # t = xi / J with J = 1
    return errs


def check_figures() -> CheckResult:
    return _error("figures", max(figure_endpoint_errors()), 1e-9)


CHECKS = (
    check_metric,
    check_curvature,
    check_topology,
    check_dynamical_phase,
    check_phase_decomposition,
    check_short_time_phase,
    check_aa_phase,
    check_speed_uncertainty,
    check_brachistochrone,
    check_speed_maximizer,
    check_two_qubit_concurrence,
    check_short_time_concurrence,
    check_substitution,
    check_figures,
)


def validate_suite(checks=CHECKS) -> ValidationReport:
    """Run the battery; failures are reported, never raised."""
    results = []
    for check in checks:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failed check
            name = check.__name__.removeprefix("check_")
            results.append(CheckResult(name, float("nan"), float("nan"), False, detail=str(exc)))
    return ValidationReport(tuple(results))
