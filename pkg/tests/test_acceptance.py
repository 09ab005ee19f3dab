"""Acceptance gate: each test prints one PASS/FAIL line for its criterion."""

import time

import numpy as np

from spingeom import dynamics, entanglement, geometry, hilbert, phases, validation
from spingeom.hilbert import ParamPoint, SystemConfig


def _configs():
    return [SystemConfig.create(n, ts) for n, ts in validation.ACCEPTANCE_CONFIGS]


def test_criterion_01_metric_oracle(report):
    start = time.perf_counter()
    result = validation.check_metric(n_theta=20, n_xi=8)  # 5 configs x 160 points = 800
    elapsed = time.perf_counter() - start
    passed = result.passed and result.worst <= 1e-6 and elapsed < 60
    report(1, "finite-difference metric equals closed form", passed,
           f"800 points, worst relative error {result.worst:.2e} (<= 1e-6), {elapsed:.1f} s (< 60 s)")


def test_criterion_02_curvature(report):
    result = validation.check_curvature()
    k = geometry.gaussian_curvature(SystemConfig.create(3, 2), np.linspace(0.05, np.pi - 0.05, 400))
    passed = result.passed and result.worst <= 1e-4 and bool(np.any(k < 0))
    report(2, "numeric curvature equals closed form; negative K for N=3, s=1", passed,
           f"worst relative error {result.worst:.2e} (<= 1e-4), min K(N=3,s=1) = {k.min():.4f}")


def test_criterion_03_topology(report):
    start = time.perf_counter()
    chis = []
    for n, ts, xi_max in ((2, 1, np.pi), (3, 2, 1.0), (4, 1, 2.0), (2, 3, 0.5)):
        cfg = SystemConfig.create(n, ts)
        for eps in (1e-2, 1e-3, 1e-4):
            chis.append(geometry.euler_characteristic(cfg, xi_max, eps).euler_characteristic)
    elapsed = time.perf_counter() - start
    worst = max(abs(c - 2) for c in chis)
    report(3, "Gauss-Bonnet chi = 2 for 4 systems x 3 epsilons", worst <= 1e-2 and elapsed < 30,
           f"max |chi - 2| = {worst:.2e} (<= 1e-2), {elapsed:.1f} s (< 30 s)")


def _short_time_constants(cfg, theta, xis=(1e-2, 1e-3)):
    out = []
    for xi in xis:
        point = ParamPoint(theta, 0.0, xi)
        exact = phases.geometric_phase(cfg, point).geometric_phase
        err = abs(phases.wrap_phase(phases.geometric_phase_short_time(cfg, point) - exact))
        out.append(err / xi**3)
    return out


def test_criterion_04_phases(report):
    dyn = validation.check_dynamical_phase()
    decomposition = validation.check_phase_decomposition()
    aa = validation.check_aa_phase()
    orders, drift = [], 0.0
    for cfg in _configs():
        for theta in (0.5, np.pi / 3, 1.2):
            orders.append(validation.short_time_phase_order(cfg, theta))
            c_coarse, c_fine = _short_time_constants(cfg, theta)
            drift = max(drift, abs(c_fine / c_coarse - 1))
    # order >= 3: err / xi^3 tends to a constant (bounded), and the fitted slope is 3
    # up to the pre-asymptotic bias of the xi = 0.1 point
    order_ok = drift <= 1e-2 and min(orders) >= validation.SHORT_TIME_PHASE_MIN_ORDER
    passed = dyn.passed and decomposition.passed and aa.passed and order_ok
    report(4, "dynamical, decomposition, short-time order and AA phases", passed,
           f"dyn {dyn.worst:.1e} (<= 1e-12), identity {decomposition.worst:.1e} (<= 1e-12), "
           f"err/xi^3 drift {drift:.1e} (<= 1e-2), fitted order min {min(orders):.4f}, AA {aa.worst:.1e} (<= 1e-6)")


def test_criterion_05_speed_uncertainty(report):
    result = validation.check_speed_uncertainty()
    report(5, "J sqrt(g_xx) equals energy uncertainty", result.passed,
           f"worst {result.worst:.2e} (<= 1e-9)")


def test_criterion_06_brachistochrone(report):
    worst = 0.0
    for n, ts in validation.ACCEPTANCE_CONFIGS + ((8, 1), (3, 3)):
        cfg = SystemConfig.create(n, ts)
        quotient = dynamics.minimal_distance(cfg, 1.0) / dynamics.maximize_speed_numeric(cfg)[1]
        worst = max(worst, abs(quotient - dynamics.optimal_time_ratio(cfg)))
    qubits = dynamics.optimal_time_ratio(SystemConfig.create(2, 1))
    in_n = [dynamics.optimal_time_ratio(SystemConfig.create(n, 1, max_dim=None)) for n in (2, 3, 4, 8, 32, 128)]
    in_s = [dynamics.optimal_time_ratio(SystemConfig.create(3, ts)) for ts in (1, 2, 3, 4, 5, 6)]
    monotone = bool(np.all(np.diff(in_n) < 0) and np.all(np.diff(in_s) < 0))
    passed = worst <= 1e-10 and qubits == 1.0 and monotone
    report(6, "tau/t closed form, unity for two qubits, decreasing in N and s", passed,
           f"closed vs S_min/V_max (golden section) {worst:.1e}, two-qubit ratio {qubits!r}, monotone {monotone}")


def test_criterion_07_concurrence(report):
    two_qubit = validation.check_two_qubit_concurrence()
    short = validation.check_short_time_concurrence()
    report(7, "two-qubit |sin xi| and O(xi^2) short-time concurrence for 2s <= 6",
           two_qubit.passed and short.passed,
           f"|sin xi| error {two_qubit.worst:.1e} (<= 1e-12), min order {short.worst:.3f} (>= 2)")


def test_criterion_08_substitution(report):
    result = validation.check_substitution()
    report(8, "concurrence-parametrized formulas reproduce angle forms", result.passed,
           f"worst {result.worst:.2e} (<= 1e-10)")


def test_criterion_09_figure_endpoints(report):
    errors = validation.figure_endpoint_errors()
    from spingeom import sweep

    fig1 = sweep.run_figure("fig1", twice_spins=(1,))
    k0, k_end = fig1.rows[0][5], fig1.rows[-1][5]
    errors += [abs(k0 - 5.0), abs(k_end - 0.0)]
    worst = max(errors)
    report(9, "figure presets hit their endpoint values", worst <= 1e-9,
           f"worst {worst:.1e} (<= 1e-9); s=1/2: K(0) = {k0:.12g}, K(C_max) = {k_end:.3g}")


def test_criterion_10_validate(report):
    start = time.perf_counter()
    first = validation.validate_suite().render()
    elapsed = time.perf_counter() - start
    second = validation.validate_suite().render()
    passed = first == second and first.rstrip().endswith(f"{len(validation.CHECKS)}/{len(validation.CHECKS)} checks passed") \
        and elapsed < 300
    report(10, "validate battery passes, deterministic, under 5 minutes", passed,
           f"{first.strip().splitlines()[-1]}, identical reruns {first == second}, {elapsed:.1f} s (< 300 s)")
