"""Exact product-basis states for N spin-s particles under the long-range Ising model.

Every magnetic quantum number is carried as the integer ``twice_m = 2 m`` so
that the interaction energy of a basis state is an exact integer before any
floating point multiply. Basis states are enumerated row-major over the
multi-index ``(twice_m_1, ..., twice_m_N)`` with ``twice_m`` ascending, i.e.
the first spin is the most significant digit and index 0 is ``|-s, ..., -s>``.

Coherent states use the Bloch-sphere convention
``<S> = s (sin T cos P, sin T sin P, cos T)``, so ``theta = 0`` is the
maximum-weight state ``|s, ..., s>`` and ``theta = pi`` the lowest-weight one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

DEFAULT_MAX_DIM = 2**20
NORM_TOL = 1e-12

LAYOUT = "row-major-ascending-m"


class DimensionError(ValueError):
    """Raised when a Hilbert space would exceed the configured dimension cap."""


class ConfigMismatchError(ValueError):
    """Raised when two states from different systems are combined."""


@dataclass(frozen=True)
class SpinValue:
    """Spin quantum number stored as ``twice_spin = 2 s``."""

    twice_spin: int

    def __post_init__(self):
        if isinstance(self.twice_spin, bool) or int(self.twice_spin) != self.twice_spin:
            raise ValueError(f"twice_spin must be an integer, got {self.twice_spin!r}")
        if self.twice_spin < 1:
            raise ValueError(f"twice_spin must be >= 1, got {self.twice_spin}")
        object.__setattr__(self, "twice_spin", int(self.twice_spin))

    @property
    def s(self) -> float:
        return self.twice_spin / 2

    @property
    def dim(self) -> int:
        return self.twice_spin + 1

    @property
    def is_half_integer(self) -> bool:
        return self.twice_spin % 2 == 1

    @property
    def twice_m(self) -> np.ndarray:
        """Ascending ``2m`` values ``-2s, -2s+2, ..., 2s``."""
        return np.arange(-self.twice_spin, self.twice_spin + 1, 2, dtype=np.int64)

    @property
    def m(self) -> np.ndarray:
        return self.twice_m / 2

    def __str__(self):
        return f"{self.twice_spin}/2" if self.is_half_integer else str(self.twice_spin // 2)


def as_spin(spin) -> SpinValue:
    """Accept a :class:`SpinValue` or an integer ``twice_spin``."""
    if isinstance(spin, SpinValue):
        return spin
    return SpinValue(spin)


@dataclass(frozen=True)
class SystemConfig:
    """N identical spins with Ising coupling ``J`` (hbar = 1).

    ``max_dim=None`` lifts the dimension cap; such configs are only meant for
    closed-form evaluations that never build a state vector.
    """

    n_spins: int
    spin: SpinValue
    coupling: float = 1.0
    max_dim: int | None = DEFAULT_MAX_DIM

    def __post_init__(self):
        object.__setattr__(self, "spin", as_spin(self.spin))
        if isinstance(self.n_spins, bool) or int(self.n_spins) != self.n_spins or self.n_spins < 1:
            raise ValueError(f"n_spins must be a positive integer, got {self.n_spins!r}")
        object.__setattr__(self, "n_spins", int(self.n_spins))
        coupling = float(self.coupling)
        if not np.isfinite(coupling):
            raise ValueError("coupling must be finite")
        object.__setattr__(self, "coupling", coupling)
        if self.max_dim is not None and self.dim > self.max_dim:
            raise DimensionError(
                f"Hilbert dimension {self.spin.dim}^{self.n_spins} = {self.dim} exceeds cap {self.max_dim}"
            )

    @classmethod
    def create(cls, n_spins, twice_spin, coupling=1.0, max_dim=DEFAULT_MAX_DIM):
        return cls(n_spins, SpinValue(twice_spin), coupling, max_dim)

    @property
    def s(self) -> float:
        return self.spin.s

    @property
    def dim(self) -> int:
        return self.spin.dim**self.n_spins

    @property
    def n_pairs(self) -> int:
        return self.n_spins * (self.n_spins - 1) // 2

    def to_dict(self) -> dict:
        return {"n_spins": self.n_spins, "twice_spin": self.spin.twice_spin, "coupling": self.coupling}


@dataclass(frozen=True)
class ParamPoint:
    """Coordinates ``(theta, phi, xi)`` on the state manifold, ``xi = J t``."""

    theta: float
    phi: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        theta, phi, xi = float(self.theta), float(self.phi), float(self.xi)
        if not (0.0 <= theta <= np.pi):
            raise ValueError(f"theta must lie in [0, pi], got {theta}")
        if not np.isfinite(phi):
            raise ValueError("phi must be finite")
        if not (np.isfinite(xi) and xi >= 0.0):
            raise ValueError(f"xi must be a finite value >= 0, got {xi}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", float(np.mod(phi, 2 * np.pi)))
        object.__setattr__(self, "xi", xi)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the ``(2s+1)^N`` product basis."""

    config: SystemConfig
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).ravel()
        if amps.size != self.config.dim:
            raise ValueError(f"expected {self.config.dim} amplitudes, got {amps.size}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |psi|^2 = {norm!r}")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per spin."""
        return self.amplitudes.reshape((self.config.spin.dim,) * self.config.n_spins)

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config.to_dict(),
                "layout": LAYOUT,
                "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PureState":
        record = json.loads(text)
        if record.get("layout") != LAYOUT:
            raise ValueError(f"unsupported layout {record.get('layout')!r}")
        cfg = record["config"]
        config = SystemConfig.create(cfg["n_spins"], cfg["twice_spin"], cfg.get("coupling", 1.0))
        amps = np.array([complex(re, im) for re, im in record["amplitudes"]])
        return cls(config, amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.entries, dtype=np.complex128)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {np.trace(rho)!r} != 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _readonly(rho))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def build_spin_operators(spin) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(Sx, Sy, Sz)`` in the ascending-m basis."""
    spin = as_spin(spin)
    s = spin.s
    m = spin.m
    sz = np.diag(m).astype(np.complex128)
    # S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; ascending order puts |m+1> one row below.
    splus = np.diag(np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1)), k=-1).astype(np.complex128)
    sminus = splus.conj().T
    sx = (splus + sminus) / 2
    sy = (splus - sminus) / 2j
    return sx, sy, sz


@lru_cache(maxsize=64)
def _pair_energy_int(n_spins: int, twice_spin: int) -> np.ndarray:
    # Integer sum_{k<l} twice_m_k * twice_m_l per basis state (= 4 sum m_k m_l).
    tm = SpinValue(twice_spin).twice_m
    total = np.zeros(1, dtype=np.int64)
    squares = np.zeros(1, dtype=np.int64)
    for _ in range(n_spins):
        total = np.add.outer(total, tm).ravel()
        squares = np.add.outer(squares, tm * tm).ravel()
    return _readonly((total * total - squares) // 2)


def pair_energies(config: SystemConfig) -> np.ndarray:
    """Eigenvalues of ``H / J = 2 sum_{k<l} m_k m_l`` over the product basis."""
    return _pair_energy_int(config.n_spins, config.spin.twice_spin) / 2


def hamiltonian_diagonal(config: SystemConfig) -> np.ndarray:
    return config.coupling * pair_energies(config)


def hamiltonian_matrix(config: SystemConfig) -> np.ndarray:
    """Dense ``2J sum_{k<l} Sz_k Sz_l`` assembled from Kronecker products."""
    _, _, sz = build_spin_operators(config.spin)
    d, n = config.spin.dim, config.n_spins
    eye = np.eye(d)
    h = np.zeros((config.dim, config.dim), dtype=np.complex128)
    for k in range(n):
        for l in range(k + 1, n):
            ops = [eye] * n
            ops[k] = sz
            ops[l] = sz
            term = ops[0]
            for op in ops[1:]:
                term = np.kron(term, op)
            h += term
    return 2 * config.coupling * h


def coherent_amplitudes(spin, theta: float, phi: float) -> np.ndarray:
    """Single-spin coherent state on the ascending-m basis.

    ``c_m = sqrt(C(2s, s+m)) cos(T/2)^(s+m) sin(T/2)^(s-m) exp(i P (s-m))``,
    equal to ``(1 + |Z|^2)^(-s) Z^(s-m) sqrt(C(2s, s+m))`` with the
    conjugate stereographic coordinate ``Z = tan(T/2) exp(i P)``.
    """
    spin = as_spin(spin)
    ts = spin.twice_spin
    if theta == np.pi:
        amps = np.zeros(spin.dim, dtype=np.complex128)
        amps[0] = 1.0
        return amps
    up = (ts + spin.twice_m) // 2
    down = ts - up
    binom = np.array([comb(ts, int(k)) for k in up], dtype=float)
    c, sn = np.cos(theta / 2), np.sin(theta / 2)
    return np.sqrt(binom) * c**up * sn**down * np.exp(1j * phi * down)


def build_initial_state(config: SystemConfig, theta: float, phi: float = 0.0) -> PureState:
    """Product of N identical spin coherent states."""
    if not (0.0 <= theta <= np.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    single = coherent_amplitudes(config.spin, theta, phi)
    amps = np.ones(1, dtype=np.complex128)
    for _ in range(config.n_spins):
        amps = np.kron(amps, single)
    amps /= np.sqrt(np.vdot(amps, amps).real)
    return PureState(config, amps)


def evolve(initial: PureState, xi: float) -> PureState:
    """Apply ``exp(-i H t)`` with ``xi = J t``; H is diagonal in the product basis."""
    config = initial.config
    phase = np.exp(-1j * (xi / 2) * _pair_energy_int(config.n_spins, config.spin.twice_spin))
    return PureState(config, initial.amplitudes * phase)


def evolved_state(config: SystemConfig, point: ParamPoint) -> PureState:
    return evolve(build_initial_state(config, point.theta, point.phi), point.xi)


def overlap(a: PureState, b: PureState) -> complex:
    """``<a|b>``."""
    if a.config.n_spins != b.config.n_spins or a.config.spin != b.config.spin:
        raise ConfigMismatchError("states belong to different systems")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def hamiltonian_moments(state: PureState) -> tuple[float, float]:
    """Return ``(<H>, <H^2> - <H>^2)``."""
    probs = np.abs(state.amplitudes) ** 2
    energies = hamiltonian_diagonal(state.config)
    mean = float(probs @ energies)
    variance = float(probs @ (energies - mean) ** 2)
    return mean, variance


def partial_trace(state: PureState, keep: int) -> DensityMatrix:
    """Reduced density matrix of spin ``keep`` (1-based)."""
    n = state.config.n_spins
    if n < 2:
        raise ValueError("partial trace needs at least two spins")
    if not (1 <= keep <= n):
        raise IndexError(f"keep must lie in [1, {n}], got {keep}")
    d = state.config.spin.dim
    psi = np.moveaxis(state.tensor(), keep - 1, 0).reshape(d, -1)
    rho = psi @ psi.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho)


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)`` as the Frobenius norm of a Hermitian matrix."""
    return float(np.sum(np.abs(rho.entries) ** 2))


def periodicity_sign(config: SystemConfig) -> int:
    """Sign ``c`` with ``Psi(xi + period) = c Psi(xi)``.

    The period is ``2 pi`` for half-integer spin and ``pi`` for integer spin.
    For integer spin every pair term ``m_k m_l`` is an integer, so the sign is
    ``+1``; for half-integer spin each ``(2m_k)(2m_l)`` is odd and the state
    picks up ``(-1)^(N(N-1)/2)``.
    """
    if config.spin.is_half_integer:
        return -1 if config.n_pairs % 2 else 1
    return 1


def evolution_period(config: SystemConfig) -> float:
    return 2 * np.pi if config.spin.is_half_integer else np.pi
