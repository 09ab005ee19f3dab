"""scikit-learn style wrappers around the functional core.

The transformers are stateless apart from the validated system configuration
built in ``fit``; each row of ``X`` is one point of the state manifold. They
can be dropped into pipelines or used with ``get_params``/``set_params``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import dynamics, entanglement, geometry, phases
from ._validation import check_config, check_nonnegative, check_points, check_theta
from .hilbert import ParamPoint


class _SystemMixin:
    """Shared ``fit``: validate the parameters and build ``config_``."""

    _input_names: tuple[str, ...] = ()
    _output_names: tuple[str, ...] = ()

    def _system(self):
        return check_config(self.n_spins, self.twice_spin, self.coupling)

    def fit(self, X=None, y=None):
        self.config_ = self._system()
        self._check_params()
        if X is not None:
            X = check_points(X, len(self._input_names), self._input_names)
            self.n_features_in_ = X.shape[1]
        return self

    def _check_params(self):
        pass

    def _validate(self, X):
        check_is_fitted(self, "config_")
        return check_points(X, len(self._input_names), self._input_names)

    def get_feature_names_out(self, input_features=None):
        return np.array(self._output_names, dtype=object)


class MetricTransformer(_SystemMixin, TransformerMixin, BaseEstimator):
    """``(theta, phi, xi)`` rows to ``(g_tt, g_pp, g_xx, g_px)``."""

    _input_names = ("theta", "phi", "xi")
    _output_names = ("g_tt", "g_pp", "g_xx", "g_px")

    def __init__(self, n_spins=2, twice_spin=1, coupling=1.0, method="closed", step=geometry.METRIC_STEP):
        self.n_spins = n_spins
        self.twice_spin = twice_spin
        self.coupling = coupling
        self.method = method
        self.step = step

    def _check_params(self):
        if self.method not in ("closed", "numeric"):
            raise ValueError(f"method must be 'closed' or 'numeric', got {self.method!r}")

    def transform(self, X):
        X = self._validate(X)
        fn = geometry.metric_closed_form if self.method == "closed" else (
            lambda c, p: geometry.metric_numeric(c, p, self.step))
        out = [fn(self.config_, ParamPoint(*row)) for row in X]
        return np.array([[m.g_tt, m.g_pp, m.g_xx, m.g_px] for m in out]).reshape(-1, 4)


class CurvatureTransformer(_SystemMixin, TransformerMixin, BaseEstimator):
    """``theta`` column to the Gaussian curvature."""

    _input_names = ("theta",)
    _output_names = ("curvature",)

    def __init__(self, n_spins=2, twice_spin=1, coupling=1.0, method="closed", step=geometry.CURVATURE_STEP):
        self.n_spins = n_spins
        self.twice_spin = twice_spin
        self.coupling = coupling
        self.method = method
        self.step = step

    def _check_params(self):
        if self.method not in ("closed", "numeric"):
            raise ValueError(f"method must be 'closed' or 'numeric', got {self.method!r}")

    def transform(self, X):
        theta = check_theta(self._validate(X)[:, 0])
        if self.method == "closed":
            k = geometry.gaussian_curvature(self.config_, theta)
        else:
            k = [geometry.gaussian_curvature_numeric(self.config_, t, self.step) for t in theta]
        return np.asarray(k, dtype=float).reshape(-1, 1)


class PhaseTransformer(_SystemMixin, TransformerMixin, BaseEstimator):
    """``(theta, phi, xi)`` rows to ``(global, dynamical, geometric)`` phases."""

    _input_names = ("theta", "phi", "xi")
    _output_names = ("global_phase", "dynamical_phase", "geometric_phase")

    def __init__(self, n_spins=2, twice_spin=1, coupling=1.0):
        self.n_spins = n_spins
        self.twice_spin = twice_spin
        self.coupling = coupling

    def transform(self, X):
        X = self._validate(X)
        rows = [phases.geometric_phase(self.config_, ParamPoint(*row)) for row in X]
        return np.array([[r.global_phase, r.dynamical_phase, r.geometric_phase] for r in rows]).reshape(-1, 3)


class SpeedTransformer(_SystemMixin, TransformerMixin, BaseEstimator):
    """``(theta, xi)`` rows to ``(speed, distance)``."""

    _input_names = ("theta", "xi")
    _output_names = ("speed", "distance")

    def __init__(self, n_spins=2, twice_spin=1, coupling=1.0):
        self.n_spins = n_spins
        self.twice_spin = twice_spin
        self.coupling = coupling

    def transform(self, X):
        X = self._validate(X)
        theta, xi = check_theta(X[:, 0]), check_nonnegative(X[:, 1], "xi")
        v = dynamics.speed(self.config_, theta)
        d = dynamics.geodesic_distance(self.config_, theta, xi)
        return np.column_stack([v, d])


class ConcurrenceTransformer(_SystemMixin, TransformerMixin, BaseEstimator):
    """``(theta, phi, xi)`` rows of the two-spin system to the I-concurrence."""

    _input_names = ("theta", "phi", "xi")
    _output_names = ("concurrence",)

    def __init__(self, twice_spin=1, method="exact"):
        self.twice_spin = twice_spin
        self.method = method

    def _system(self):
        return check_config(2, self.twice_spin)

    def _check_params(self):
        if self.method not in ("exact", "short_time"):
            raise ValueError(f"method must be 'exact' or 'short_time', got {self.method!r}")

    def transform(self, X):
        X = self._validate(X)
        spin = self.config_.spin
        if self.method == "exact":
            points = [ParamPoint(*row) for row in X]
            c = [entanglement.iconcurrence_exact(spin, p.theta, p.phi, p.xi) for p in points]
        else:
            c = entanglement.iconcurrence_short_time(spin, check_theta(X[:, 0]), check_nonnegative(X[:, 2], "xi"))
        return np.asarray(c, dtype=float).reshape(-1, 1)


class EntanglementGeometryTransformer(_SystemMixin, TransformerMixin, BaseEstimator):
    """Concurrence column to curvature, phase, speed, distance and optimal time."""

    _input_names = ("c",)
    _output_names = ("curvature", "geometric_phase", "speed", "distance", "optimal_time")

    def __init__(self, twice_spin=1, xi=entanglement.DEFAULT_XI_PRIME_MAX,
                 xi_prime_max=entanglement.DEFAULT_XI_PRIME_MAX, coupling=1.0):
        self.twice_spin = twice_spin
        self.xi = xi
        self.xi_prime_max = xi_prime_max
        self.coupling = coupling

    def _system(self):
        return check_config(2, self.twice_spin, self.coupling)

    def _check_params(self):
        self.context_ = entanglement.ConcurrenceContext(
            self.config_.spin, self.xi, self.xi_prime_max, 0.0, self.coupling)

    def transform(self, X):
        X = self._validate(X)
        rows = []
        for c in X[:, 0]:
            ctx = self.context_.with_c(c)
            distance, tau = entanglement.distance_and_time_from_concurrence(ctx)
            rows.append([
                entanglement.curvature_from_concurrence(ctx),
                entanglement.phase_from_concurrence(ctx),
                entanglement.speed_from_concurrence(ctx),
                distance,
                tau,
            ])
        return np.array(rows, dtype=float).reshape(-1, 5)


class BrachistochroneEstimator(_SystemMixin, RegressorMixin, BaseEstimator):
    """``fit`` solves the speed maximisation; ``predict`` maps ``xi`` to the optimal time."""

    _input_names = ("xi",)
    _output_names = ("tau",)

    def __init__(self, n_spins=2, twice_spin=1, coupling=1.0, trivial=False):
        self.n_spins = n_spins
        self.twice_spin = twice_spin
        self.coupling = coupling
        self.trivial = trivial

    def _check_params(self):
        solution = dynamics.brachistochrone(self.config_, 1.0, trivial=self.trivial)
        self.theta_max_ = solution.theta_max
        self.v_max_ = solution.v_max
        self.ratio_ = solution.ratio_tau_over_t

    def predict(self, X):
        xi = check_nonnegative(self._validate(X)[:, 0], "xi")
        return self.ratio_ * xi / self.config_.coupling

    def solution(self, xi: float) -> dynamics.BrachistochroneSolution:
        check_is_fitted(self, "config_")
        return dynamics.brachistochrone(self.config_, xi, trivial=self.trivial)
