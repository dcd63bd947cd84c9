"""Exact Jaynes-Cummings dynamics and checks of the dispersive approximation.

The Hamiltonian (hbar = 1)

    H = omega a^dag a + omega0 sigma_z / 2 + coupling (sigma_+ a + a^dag sigma_-)

conserves the excitation number, so it is block diagonal on
``{|e,n>, |g,n+1>}`` plus the isolated ground state ``|g,0>``. Each 2x2
block is exponentiated in closed form. Truncation keeps complete blocks
only: ``|e,cutoff>`` is dropped because its partner lies outside the space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersive import AtomFieldState
from .errors import InvalidArgumentError, ShapeError, TruncationError
from .fock import FockVector


@dataclass(frozen=True)
class JCParams:
    """Field frequency, atomic frequency, coupling (all rad/time) and Fock cutoff."""

    omega: float
    omega0: float
    coupling: float
    cutoff: int

    def __post_init__(self):
        for name in ("omega", "omega0", "coupling"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidArgumentError(f"{name} must be positive and finite, got {value}")
        if self.cutoff < 1:
            raise InvalidArgumentError(f"cutoff must be >= 1, got {self.cutoff}")

    @property
    def detuning(self) -> float:
        return self.omega0 - self.omega

    @property
    def lambda_eff(self) -> float:
        """Second-order dispersive coupling ``coupling**2 / detuning``."""
        return self.coupling ** 2 / self.detuning

    @classmethod
    def from_ratio(cls, ratio: float, cutoff: int, coupling: float = 1.0,
                   omega: float = 1.0) -> JCParams:
        """Parameters with ``detuning / coupling == ratio``."""
        return cls(omega=omega, omega0=omega + ratio * coupling, coupling=coupling, cutoff=cutoff)


@dataclass(frozen=True)
class DressedBlock:
    n: int
    rabi_frequency: float
    mixing_angle: float


def dressed_block(params: JCParams, n: int) -> DressedBlock:
    """Generalized Rabi frequency and mixing angle of the ``{|e,n>, |g,n+1>}`` block."""
    g = params.coupling * math.sqrt(n + 1)
    return DressedBlock(
        n=n,
        rabi_frequency=math.hypot(params.detuning, 2.0 * g),
        mixing_angle=0.5 * math.atan2(2.0 * g, params.detuning),
    )


def _block_interaction(params: JCParams, n: int, times: np.ndarray) -> np.ndarray:
    """``exp(-i M t)`` for ``M = [[d/2, g], [g, -d/2]]``, shape ``(len(times), 2, 2)``.

    Basis order is ``(|e,n>, |g,n+1>)``.
    """
    d = params.detuning
    g = params.coupling * math.sqrt(n + 1)
    half = 0.5 * math.hypot(d, 2.0 * g)
    c = np.cos(half * times)
    s = np.sin(half * times) / half
    out = np.empty(times.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c - 0.5j * d * s
    out[..., 1, 1] = c + 0.5j * d * s
    out[..., 0, 1] = out[..., 1, 0] = -1j * g * s
    return out


def block_propagator(params: JCParams, n: int, t: float, frame: str = "lab") -> np.ndarray:
    """2x2 evolution operator of block ``n``.

    ``frame="lab"`` is ``exp(-iHt)``; ``frame="interaction"`` removes the free
    evolution ``exp(-i H0 t)`` with ``H0 = omega a^dag a + omega0 sigma_z/2``.
    """
    u = _block_interaction(params, n, np.asarray([t], dtype=float))[0]
    d = params.detuning
    if frame == "interaction":
        return np.diag([np.exp(0.5j * d * t), np.exp(-0.5j * d * t)]) @ u
    if frame == "lab":
        return np.exp(-1j * params.omega * (n + 0.5) * t) * u
    raise InvalidArgumentError(f"unknown frame {frame!r}")


def evolve_exact(params: JCParams, initial: AtomFieldState, t: float) -> AtomFieldState:
    """Lab-frame state ``exp(-iHt)|initial>`` on the truncated joint space."""
    cutoff = params.cutoff
    if initial.cutoff != cutoff:
        raise ShapeError(f"state cutoff {initial.cutoff} != params cutoff {cutoff}")
    if initial.e_branch[cutoff] != 0:
        raise TruncationError(f"|e,{cutoff}> couples to |g,{cutoff + 1}> beyond the cutoff")
    g_in, e_in = initial.g_branch, initial.e_branch
    g_out: dict[int, complex] = {}
    e_out: dict[int, complex] = {}
    if g_in[0]:
        g_out[0] = g_in[0] * np.exp(0.5j * params.omega0 * t)
    for n in range(cutoff):
        a_e, a_g = e_in[n], g_in[n + 1]
        if not (a_e or a_g):
            continue
        u = block_propagator(params, n, t)
        e_out[n] = u[0, 0] * a_e + u[0, 1] * a_g
        g_out[n + 1] = u[1, 0] * a_e + u[1, 1] * a_g
    return AtomFieldState(FockVector(g_out, cutoff), FockVector(e_out, cutoff))


def joint_operators(cutoff: int) -> dict[str, np.ndarray]:
    """Dense operators on ``atom (x) field`` with atom basis ``(|e>, |g>)``."""
    dim = cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)
    eye_f = np.eye(dim)
    sigma_plus = np.array([[0, 1], [0, 0]], dtype=complex)
    sigma_z = np.diag([1.0, -1.0]).astype(complex)
    return {
        "a": np.kron(np.eye(2), a),
        "sigma_plus": np.kron(sigma_plus, eye_f),
        "sigma_z": np.kron(sigma_z, eye_f),
        "num": np.kron(np.eye(2), a.conj().T @ a),
    }


def complete_block_indices(cutoff: int) -> np.ndarray:
    """Indices of the kept basis: everything except ``|e,cutoff>``."""
    return np.array([i for i in range(2 * (cutoff + 1)) if i != cutoff])


def hamiltonian_parts(params: JCParams) -> dict[str, np.ndarray]:
    """``H0``, ``V`` and the near-resonance split ``H0'``, ``V'``, restricted to complete blocks."""
    ops = joint_operators(params.cutoff)
    a, sp, sz, num = ops["a"], ops["sigma_plus"], ops["sigma_z"], ops["num"]
    v = params.coupling * (sp @ a + a.conj().T @ sp.conj().T)
    parts = {
        "H0": params.omega * num + 0.5 * params.omega0 * sz,
        "V": v,
        "H0p": params.omega * (num + 0.5 * sz),
        "Vp": 0.5 * params.detuning * sz + v,
    }
    keep = complete_block_indices(params.cutoff)
    return {k: m[np.ix_(keep, keep)] for k, m in parts.items()}


def verify_commutators(params: JCParams) -> tuple[float, float]:
    """Spectral norms of ``[H0, V]`` and ``[H0', V']`` on complete blocks."""
    if params.cutoff < 2:
        raise InvalidArgumentError(f"cutoff must be >= 2, got {params.cutoff}")
    p = hamiltonian_parts(params)

    def comm_norm(x, y):
        return float(np.linalg.norm(x @ y - y @ x, ord=2))

    return comm_norm(p["H0"], p["V"]), comm_norm(p["H0p"], p["Vp"])


@dataclass(frozen=True, eq=False)
class DispersiveComparison:
    """Exact evolution of ``|e,m>``, ``m = 0..n_max``, against the dispersive model.

    ``fidelities[m]`` is the worst overlap over ``[0, t]`` of the probe
    ``|e>(|0> + |m>)/sqrt2`` (just ``|e,0>`` for ``m = 0``) with the model
    prediction; ``leakages[m]`` the largest population that left ``|e,m>``.
    ``phases[m]`` is the exact phase lost by ``|e,m>`` by time ``t`` in the
    interaction picture; a linear fit gives ``phase_slope`` (per photon, per
    unit time) and ``phase_offset`` (intercept per unit time).
    """

    params: JCParams
    t: float
    ns: np.ndarray
    fidelities: np.ndarray
    leakages: np.ndarray
    phases: np.ndarray
    phase_slope: float
    phase_offset: float

    @property
    def lambda_eff_theory(self) -> float:
        return self.params.lambda_eff

    @property
    def fidelity(self) -> float:
        return float(self.fidelities.min())

    @property
    def population_leakage(self) -> float:
        return float(self.leakages.max())

    def summary(self) -> tuple[float, float, float]:
        return self.population_leakage, self.phase_slope, self.fidelity


MIN_DISPERSIVE_RATIO = 5.0


def _time_grid(params: JCParams, n_max: int, t: float, resolution: float) -> np.ndarray:
    omega_max = dressed_block(params, n_max).rabi_frequency
    count = max(201, math.ceil(omega_max * t / resolution) + 1)
    return np.linspace(0.0, t, count)


def compare_dispersive(params: JCParams, n: int, t: float,
                       resolution: float = 0.5) -> DispersiveComparison:
    """Validate the dispersive phase model against exact evolution up to photon number ``n``.

    The model evolves ``|e,m>`` as ``exp(-i*lambda_eff*m*t)|e,m>`` in the
    interaction picture and leaves populations untouched. ``resolution`` is
    the largest Rabi-phase step (radians) between time samples.
    """
    ratio = params.detuning / params.coupling
    if ratio < MIN_DISPERSIVE_RATIO:
        raise InvalidArgumentError(
            f"detuning/coupling = {ratio:g} is outside the dispersive regime (need >= 5)")
    if n < 1:
        raise InvalidArgumentError(f"need n >= 1 to fit a phase slope, got {n}")
    if n + 1 > params.cutoff - 1:
        raise TruncationError(f"n={n} needs cutoff >= {n + 2}, got {params.cutoff}")
    if not t > 0:
        raise InvalidArgumentError(f"t must be positive, got {t}")

    times = _time_grid(params, n, t, resolution)
    frame = np.exp(0.5j * params.detuning * times)
    amp_e = np.stack([frame * _block_interaction(params, m, times)[:, 0, 0]
                      for m in range(n + 1)])
    ns = np.arange(n + 1)
    leakages = (1.0 - np.abs(amp_e) ** 2).max(axis=1)
    phases = -np.unwrap(np.angle(amp_e), axis=1)[:, -1]

    model = np.exp(1j * params.lambda_eff * np.outer(ns, times))
    fidelities = np.empty(n + 1)
    fidelities[0] = (np.abs(amp_e[0]) ** 2).min()
    for m in range(1, n + 1):
        overlap = 0.5 * (amp_e[0] + model[m] * amp_e[m])
        fidelities[m] = (np.abs(overlap) ** 2).min()

    slope, intercept = np.polyfit(ns, phases, 1)
    return DispersiveComparison(
        params=params,
        t=t,
        ns=ns,
        fidelities=fidelities,
        leakages=leakages,
        phases=phases,
        phase_slope=float(slope / t),
        phase_offset=float(intercept / t),
    )
