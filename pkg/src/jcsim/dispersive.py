"""Dispersive atom-field pipeline.

An atom prepared in ``(|e> + |g>)/sqrt(2)`` crosses a cavity holding the
field ``|psi_F>``. The dispersive coupling only imprints the phase
``exp(i*phi*n)`` on the field attached to ``|e>``. A second Ramsey zone
mixes the two atomic levels, and detecting the atom in ``|g>`` leaves the
field in ``|psi_F> + exp(i*phi*n)|psi_F>`` (normalized).

``phi`` is the accumulated dispersive phase (coupling times interaction
time). Every intermediate joint state is kept at unit norm.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DegenerateEventError, InvalidSpecError, NormalizationError, ShapeError
from .fock import NORM_TOL, FockVector, combine, require_normalized

SQRT1_2 = 1.0 / math.sqrt(2.0)


class AtomLevel(str, enum.Enum):
    G = "g"
    E = "e"


@dataclass(frozen=True, eq=False)
class AtomFieldState:
    """Joint state ``|g>|g_branch> + |e>|e_branch>``."""

    g_branch: FockVector
    e_branch: FockVector

    def __post_init__(self):
        if self.g_branch.cutoff != self.e_branch.cutoff:
            raise ShapeError(
                f"branch cutoffs differ: {self.g_branch.cutoff} != {self.e_branch.cutoff}")
        norm_sq = self.norm_sq()
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise NormalizationError(f"joint state not normalized (norm^2 = {norm_sq!r})")

    @property
    def cutoff(self) -> int:
        return self.g_branch.cutoff

    def norm_sq(self) -> float:
        return self.g_branch.norm_sq() + self.e_branch.norm_sq()

    def branch(self, level: AtomLevel | str) -> FockVector:
        return self.g_branch if AtomLevel(level) is AtomLevel.G else self.e_branch


@dataclass(frozen=True)
class TwoFockSpec:
    """Initial field ``c1|n1> + c2|n2>`` with ``n1 < n2``."""

    n1: int
    n2: int
    c1: complex = SQRT1_2
    c2: complex = SQRT1_2

    def __post_init__(self):
        if not (0 <= self.n1 < self.n2):
            raise InvalidSpecError(f"need 0 <= n1 < n2, got n1={self.n1}, n2={self.n2}")
        w1, w2 = abs(self.c1) ** 2, abs(self.c2) ** 2
        if abs(w1 + w2 - 1.0) > NORM_TOL:
            raise InvalidSpecError(f"|c1|^2 + |c2|^2 = {w1 + w2!r}, expected 1")
        if w1 == 0.0 or w2 == 0.0:
            raise InvalidSpecError("both Fock components need nonzero weight")

    @classmethod
    def equal(cls, n1: int, n2: int) -> TwoFockSpec:
        return cls(n1, n2)

    @classmethod
    def from_weights(cls, n1: int, n2: int, w1: float, w2: float) -> TwoFockSpec:
        """Real non-negative amplitudes from (unnormalized) probabilities."""
        total = w1 + w2
        return cls(n1, n2, math.sqrt(w1 / total), math.sqrt(w2 / total))

    def scaled(self, p: int) -> TwoFockSpec:
        return TwoFockSpec(p * self.n1, p * self.n2, self.c1, self.c2)

    def initial_state(self, cutoff: int | None = None) -> FockVector:
        cutoff = self.n2 if cutoff is None else cutoff
        return FockVector({self.n1: self.c1, self.n2: self.c2}, cutoff)


def phase_evolve(field: FockVector, phi: float) -> FockVector:
    """Apply ``exp(i*phi*n)`` to every Fock component."""
    return FockVector({n: a * cmath.exp(1j * phi * n) for n, a in field}, field.cutoff)


def entangle(field: FockVector, phi: float) -> AtomFieldState:
    """Joint state after the atom, prepared in ``(|e>+|g>)/sqrt(2)``, crosses the cavity."""
    require_normalized(field)
    return AtomFieldState(
        g_branch=field.scaled(SQRT1_2),
        e_branch=phase_evolve(field, phi).scaled(SQRT1_2),
    )


def ramsey(state: AtomFieldState) -> AtomFieldState:
    """Second Ramsey zone: ``|e> -> (|e>+|g>)/sqrt2``, ``|g> -> (|g>-|e>)/sqrt2``."""
    g, e = state.g_branch, state.e_branch
    new_g = combine([(SQRT1_2, g), (SQRT1_2, e)])
    new_e = combine([(SQRT1_2, e), (-SQRT1_2, g)])
    return AtomFieldState(FockVector(new_g, state.cutoff), FockVector(new_e, state.cutoff))


def project_atom(state: AtomFieldState, outcome: AtomLevel | str) -> tuple[float, FockVector]:
    """Detect the atom in ``outcome``; return the probability and the conditional field."""
    branch = state.branch(outcome)
    prob = branch.norm_sq()
    if prob < NORM_TOL:
        raise DegenerateEventError(f"outcome {AtomLevel(outcome).value!r} has probability {prob:.3g}")
    return prob, branch.scaled(1.0 / math.sqrt(prob))


@dataclass(frozen=True)
class EvolvedTwoFock:
    """Closed-form field after ``g`` detection for a two-Fock initial state.

    The field is ``eta * sum_i sqrt(2)|c_i| e^{i arg c_i} e^{i theta_i} cos(theta_i) |n_i>``
    with ``theta_i = phi * n_i / 2``. ``eta`` is scaled so that equal weights
    give ``(cos^2 theta_1 + cos^2 theta_2)^(-1/2)``; in general
    ``eta**2 == 1 / (2 * detection_probability)``.
    """

    spec: TwoFockSpec
    phi: float
    theta1: float
    theta2: float
    eta: float
    detection_probability: float

    @property
    def amplitude1(self) -> complex:
        return self.spec.c1 * cmath.exp(1j * self.theta1) * math.cos(self.theta1) \
            / math.sqrt(self.detection_probability)

    @property
    def amplitude2(self) -> complex:
        return self.spec.c2 * cmath.exp(1j * self.theta2) * math.cos(self.theta2) \
            / math.sqrt(self.detection_probability)

    def probabilities(self) -> tuple[float, float]:
        """``(P_n1, P_n2)``; sums to 1 up to rounding."""
        a1 = abs(self.spec.c1) ** 2 * math.cos(self.theta1) ** 2
        a2 = abs(self.spec.c2) ** 2 * math.cos(self.theta2) ** 2
        total = a1 + a2
        return a1 / total, a2 / total

    def field(self, cutoff: int | None = None) -> FockVector:
        cutoff = self.spec.n2 if cutoff is None else max(cutoff, self.spec.n2)
        return FockVector({self.spec.n1: self.amplitude1, self.spec.n2: self.amplitude2}, cutoff)


def evolved_two_fock(spec: TwoFockSpec, phi: float) -> EvolvedTwoFock:
    """Field state and ``g``-detection probability for the two-Fock input at phase ``phi``.

    Raises :class:`DegenerateEventError` when both weighted cosines vanish,
    i.e. the atom is never found in ``g``.
    """
    theta1 = 0.5 * phi * spec.n1
    theta2 = 0.5 * phi * spec.n2
    prob = (abs(spec.c1) ** 2 * math.cos(theta1) ** 2
            + abs(spec.c2) ** 2 * math.cos(theta2) ** 2)
    if prob < NORM_TOL:
        raise DegenerateEventError(
            f"g is never detected for (n1={spec.n1}, n2={spec.n2}) at phi={phi!r}")
    return EvolvedTwoFock(
        spec=spec,
        phi=phi,
        theta1=theta1,
        theta2=theta2,
        eta=1.0 / math.sqrt(2.0 * prob),
        detection_probability=prob,
    )


def run_pipeline(field: FockVector, phi: float,
                 outcome: AtomLevel | str = AtomLevel.G) -> tuple[float, FockVector]:
    """entangle -> ramsey -> project_atom, in one call."""
    return project_atom(ramsey(entangle(field, phi)), outcome)
