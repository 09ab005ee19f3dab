"""Parameter sweeps and figure-data presets with deterministic CSV/JSON output."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import __version__, dynamics, entanglement, geometry, phases
from .geometry import DomainError
from .hilbert import ParamPoint, SystemConfig, evolution_period

QUANTITIES = (
    "metric", "curvature", "euler", "phase", "aa_phase", "speed", "distance",
    "brachistochrone", "concurrence", "fig1", "fig2", "fig3", "fig4", "fig5",
)
FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")
FIGURE_TWICE_SPINS = (1, 2, 3, 4)
FIGURE_COLUMNS = {
    "fig1": "curvature",
    "fig2": "geometric_phase",
    "fig3": "speed",
    "fig4": "distance",
    "fig5": "optimal_time",
}
STATUS_OK = "ok"
STATUS_SINGULAR = "singular"


class SpecError(ValueError):
    """Invalid sweep specification; ``field`` names the offending input."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    count: int = 1

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"grid count must be a positive integer, got {self.count}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ValueError("grid bounds must be finite")
        if self.start > self.stop:
            raise ValueError(f"grid start {self.start} exceeds stop {self.stop}")
        if self.count == 1 and self.start != self.stop:
            raise ValueError("a single-point grid needs start == stop")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """``"a:b:k"`` for ``k`` even points, or a bare number for one point."""
        parts = text.split(":")
        try:
            if len(parts) == 1:
                value = float(parts[0])
                return cls(value, value, 1)
            if len(parts) == 3:
                return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad grid {text!r}: {exc}") from None
        raise ValueError(f"bad grid {text!r}; expected 'start:stop:count' or a number")

    @classmethod
    def point(cls, value: float) -> "Grid":
        return cls(value, value, 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def to_dict(self) -> dict:
        return {"start": self.start, "stop": self.stop, "count": self.count}


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    config: SystemConfig
    theta: Grid = Grid.point(np.pi / 2)
    phi: Grid = Grid.point(0.0)
    xi: Grid = Grid.point(1.0)
    c_count: int = 101
    xi_prime_max: float = entanglement.DEFAULT_XI_PRIME_MAX
    xi_max: float | None = None
    epsilon: float = geometry.GAUSS_BONNET_EPSILON
    unwrap: bool = False
    trivial: bool = False

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise SpecError("quantity", f"unknown quantity {self.quantity!r}; choose from {', '.join(QUANTITIES)}")
        if self.theta.start < 0 or self.theta.stop > np.pi:
            raise SpecError("theta", "grid must lie within [0, pi]")
        if self.xi.start < 0:
            raise SpecError("xi", "grid must be >= 0")
        if int(self.c_count) != self.c_count or self.c_count < 1:
            raise SpecError("c_count", "must be a positive integer")
        if not (self.xi_prime_max > 0):
            raise SpecError("xi_prime_max", "must be positive")
        if self.quantity == "euler":
            if self.xi_max is None:
                raise SpecError("xi_max", "the euler quantity requires xi_max")
            if not self.xi_max > 0:
                raise SpecError("xi_max", "must be positive")
            if not (0 < self.epsilon < np.pi / 4):
                raise SpecError("epsilon", "must lie in (0, pi/4)")
        if self.xi_max is not None and not self.xi_max > 0:
            raise SpecError("xi_max", "must be positive")
        needs_pairs = self.quantity in ("curvature", "euler", "speed", "distance", "brachistochrone")
        if needs_pairs and self.config.n_spins < 2:
            raise SpecError("n", f"{self.quantity} needs at least two spins")
        if self.quantity == "concurrence" and self.config.n_spins != 2:
            raise SpecError("n", "concurrence is defined for two spins")
        if self.quantity == "brachistochrone":
            if self.config.coupling <= 0:
                raise SpecError("coupling", "the brachistochrone needs J > 0")
            if self.xi.start <= 0:
                raise SpecError("xi", "the brachistochrone needs xi > 0")

    def grids(self) -> dict:
        return {
            "theta": self.theta.to_dict(),
            "phi": self.phi.to_dict(),
            "xi": self.xi.to_dict(),
            "c_count": self.c_count,
        }


@dataclass
class SweepResult:
    header: list[str]
    rows: list[list]
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        k = self.header.index(name)
        return [row[k] for row in self.rows]


def figure_spec(name: str, twice_spin: int = 1, xi_prime_max: float = entanglement.DEFAULT_XI_PRIME_MAX,
                c_count: int = 101) -> SweepSpec:
    """Preset for one figure: two spins, ``xi = xi'_max`` (``tilde_xi = 1``), ``J = 1``."""
    if name not in FIGURES:
        raise SpecError("quantity", f"unknown figure {name!r}")
    config = SystemConfig.create(2, twice_spin, 1.0)
    return SweepSpec(name, config, xi=Grid.point(xi_prime_max), c_count=c_count, xi_prime_max=xi_prime_max)


# --- point evaluators -------------------------------------------------------------


def _singular(n: int) -> list:
    return [None] * n + [STATUS_SINGULAR]


def _eval_metric(config, theta, phi, xi):
    m = geometry.metric_closed_form(config, ParamPoint(theta, phi, xi))
    return [m.g_tt, m.g_pp, m.g_xx, m.g_px, STATUS_OK]


def _eval_curvature(config, theta):
    try:
        return [geometry.gaussian_curvature(config, theta), STATUS_OK]
    except DomainError:
        return _singular(1)


def _eval_phase(config, theta, phi, xi):
    try:
        b = phases.geometric_phase(config, ParamPoint(theta, phi, xi))
    except phases.UndefinedPhaseError:
        return _singular(3)
    return [b.global_phase, b.dynamical_phase, b.geometric_phase, STATUS_OK]


def _eval_aa(config, theta, xi_max):
    return [phases.aa_phase(config, theta, xi_max), int(phases.is_cyclic(config, xi_max)), STATUS_OK]


def _eval_speed(config, theta):
    return [dynamics.speed(config, theta), STATUS_OK]


def _eval_distance(config, theta, xi):
    return [dynamics.geodesic_distance(config, theta, xi), STATUS_OK]


def _eval_brachistochrone(config, xi, trivial):
    sol = dynamics.brachistochrone(config, xi, trivial=trivial)
    return [sol.theta_max, sol.v_max, sol.s_min, sol.tau, sol.t, sol.ratio_tau_over_t, STATUS_OK]


def _eval_concurrence(config, theta, phi, xi):
    exact = entanglement.iconcurrence_exact(config.spin, theta, phi, xi)
    return [exact, entanglement.iconcurrence_short_time(config.spin, theta, xi), STATUS_OK]


def _eval_figure(name, twice_spin, xi, xi_prime_max, fraction):
    ctx = entanglement.ConcurrenceContext(twice_spin, xi, xi_prime_max, 0.0, 1.0)
    c = fraction * ctx.c_max
    ctx = ctx.with_c(c)
    column = FIGURE_COLUMNS[name]
    if column == "curvature":
        value = entanglement.curvature_from_concurrence(ctx)
    elif column == "geometric_phase":
        value = entanglement.phase_from_concurrence(ctx)
    elif column == "speed":
        value = entanglement.speed_from_concurrence(ctx)
    elif column == "distance":
        value = entanglement.distance_from_concurrence(ctx)
    else:
        value = entanglement.distance_and_time_from_concurrence(ctx)[1]
    return [twice_spin, c, fraction, value, STATUS_OK]


def _evaluate(task):
    kind, args = task
    return _EVALUATORS[kind](*args)


_EVALUATORS = {
    "metric": _eval_metric,
    "curvature": _eval_curvature,
    "phase": _eval_phase,
    "aa_phase": _eval_aa,
    "speed": _eval_speed,
    "distance": _eval_distance,
    "brachistochrone": _eval_brachistochrone,
    "concurrence": _eval_concurrence,
    "figure": _eval_figure,
}


def _plan(spec: SweepSpec) -> tuple[list[str], list[tuple], list[list]]:
    """Header, evaluation tasks and the parameter prefix of every row."""
    q, cfg = spec.quantity, spec.config
    th, ph, xs = spec.theta.values(), spec.phi.values(), spec.xi.values()
    if q == "metric":
        params = list(product(th, ph, xs))
        return (["theta", "phi", "xi", "g_tt", "g_pp", "g_xx", "g_px"],
                [("metric", (cfg, *p)) for p in params], [list(p) for p in params])
    if q == "curvature":
        return ["theta", "curvature"], [("curvature", (cfg, t)) for t in th], [[t] for t in th]
    if q == "phase":
        params = list(product(th, ph, xs))
        return (["theta", "phi", "xi", "global_phase", "dynamical_phase", "geometric_phase"],
                [("phase", (cfg, *p)) for p in params], [list(p) for p in params])
    if q == "aa_phase":
        xi_max = spec.xi_max if spec.xi_max is not None else evolution_period(cfg)
        return (["theta", "xi_max", "aa_phase", "cyclic"],
                [("aa_phase", (cfg, t, xi_max)) for t in th], [[t, xi_max] for t in th])
    if q == "speed":
        return ["theta", "speed"], [("speed", (cfg, t)) for t in th], [[t] for t in th]
    if q == "distance":
        params = list(product(th, xs))
        return (["theta", "xi", "distance"], [("distance", (cfg, *p)) for p in params], [list(p) for p in params])
    if q == "brachistochrone":
        return (["xi", "theta_max", "v_max", "s_min", "tau", "t", "ratio_tau_over_t"],
                [("brachistochrone", (cfg, x, spec.trivial)) for x in xs], [[x] for x in xs])
    if q == "concurrence":
        params = list(product(th, ph, xs))
        return (["theta", "phi", "xi", "concurrence_exact", "concurrence_short_time"],
                [("concurrence", (cfg, *p)) for p in params], [list(p) for p in params])
    if q in FIGURES:
        xi = spec.xi.start
        fractions = np.linspace(0.0, 1.0, spec.c_count)
        tasks = [("figure", (q, cfg.spin.twice_spin, xi, spec.xi_prime_max, f)) for f in fractions]
        return ["xi", "xi_prime_max", "twice_spin", "c", "c_over_c_max", FIGURE_COLUMNS[q]], tasks, \
            [[xi, spec.xi_prime_max] for _ in fractions]
    raise SpecError("quantity", f"{q!r} is not a grid quantity")


def _metadata(spec: SweepSpec, extra: dict | None = None) -> dict:
    meta = {
        "tool": "spingeom",
        "version": __version__,
        "quantity": spec.quantity,
        "config": spec.config.to_dict(),
        "grids": spec.grids(),
        "tolerances": {
            "metric_step": geometry.METRIC_STEP,
            "curvature_step": geometry.CURVATURE_STEP,
            "orthogonality": phases.ORTHOGONALITY_TOL,
        },
    }
    if spec.quantity in FIGURES:
        meta["xi_prime_max"] = spec.xi_prime_max
        meta["tilde_xi"] = spec.xi_prime_max / spec.xi.start
    if spec.quantity in ("euler", "aa_phase") and spec.xi_max is not None:
        meta["xi_max"] = spec.xi_max
    if spec.quantity == "euler":
        meta["tolerances"]["epsilon"] = spec.epsilon
    if spec.quantity == "brachistochrone":
        meta["trivial"] = spec.trivial
    if extra:
        meta.update(extra)
    return meta


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Evaluate ``spec`` on its grid; rows come back in grid order for any ``jobs``."""
    if spec.quantity == "euler":
        report = geometry.euler_characteristic(spec.config, spec.xi_max, spec.epsilon)
        header = ["xi_max", "epsilon", "bulk_integral", "defect_sum", "euler_characteristic",
                  "bulk_closed_form", "status"]
        row = [report.xi_max, report.epsilon, report.bulk_integral, report.defect_sum,
               report.euler_characteristic, report.bulk_closed_form, STATUS_OK]
        return SweepResult(header, [row], _metadata(spec))
    header, tasks, prefixes = _plan(spec)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        values = [_evaluate(t) for t in tasks]
    rows = [prefix + value for prefix, value in zip(prefixes, values)]
    if spec.quantity == "phase" and spec.unwrap:
        rows = _unwrap_rows(rows, header)
    return SweepResult(header + ["status"], rows, _metadata(spec))


def _unwrap_rows(rows: list[list], header: list[str]) -> list[list]:
    """Continue global and geometric phases along ``xi`` for each ``(theta, phi)`` line."""
    cols = [header.index("global_phase"), header.index("geometric_phase")]
    lines: dict = {}
    for k, row in enumerate(rows):
        lines.setdefault((row[0], row[1]), []).append(k)
    for members in lines.values():
        good = [k for k in members if rows[k][-1] == STATUS_OK]
        for col in cols:
            unwrapped = np.unwrap([rows[k][col] for k in good])
            for k, value in zip(good, unwrapped):
                rows[k][col] = float(value)
    return rows


def run_figure(name: str, twice_spins=FIGURE_TWICE_SPINS, xi_prime_max: float = entanglement.DEFAULT_XI_PRIME_MAX,
               c_count: int = 101, jobs: int = 1) -> SweepResult:
    """Concatenate the preset sweeps of one figure over several spins."""
    results = [run_sweep(figure_spec(name, ts, xi_prime_max, c_count), jobs) for ts in twice_spins]
    meta = dict(results[0].metadata)
    meta["twice_spins"] = list(twice_spins)
    meta["config"] = {"n_spins": 2, "coupling": 1.0}
    return SweepResult(results[0].header, [row for r in results for row in r.rows], meta)


# --- serialisation ----------------------------------------------------------------


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError("non-finite value in sweep output")
        return "%.17g" % value
    return str(value)


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    return format_value(value)


def to_csv(result: SweepResult) -> str:
    lines = [f"# {key}: {json.dumps(result.metadata[key], sort_keys=True)}" for key in sorted(result.metadata)]
    lines.append(",".join(result.header))
    lines.extend(",".join(format_value(v) for v in row) for row in result.rows)
    return "\n".join(lines) + "\n"


def to_json(result: SweepResult) -> str:
    records = []
    for row in result.rows:
        fields = ", ".join(f"{json.dumps(name)}: {_json_value(v)}" for name, v in zip(result.header, row))
        records.append("    {" + fields + "}")
    body = ",\n".join(records)
    meta = json.dumps(result.metadata, sort_keys=True)
    return '{\n  "metadata": ' + meta + ',\n  "rows": [\n' + body + ("\n" if records else "") + "  ]\n}\n"


def render(result: SweepResult, fmt: str = "csv") -> str:
    if fmt == "csv":
        return to_csv(result)
    if fmt == "json":
        return to_json(result)
    raise SpecError("format", f"unknown format {fmt!r}")


__all__ = [
    "Grid", "QUANTITIES", "SpecError", "SweepResult", "SweepSpec",
    "figure_spec", "render", "run_figure", "run_sweep", "to_csv", "to_json",
]
