"""Photon statistics of the two-Fock field after ``g`` detection.

``phi`` plays the role of time throughout. Quadrature conventions:
``X = (a + a^dag)/2`` and ``Y = (a - a^dag)/(2i)``, so the vacuum variance
of each is 1/4 and squeezing means a variance below 1/4.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .dispersive import EvolvedTwoFock, TwoFockSpec, evolved_two_fock
from .errors import DegenerateEventError, InvalidArgumentError, InvalidSpecError, UndefinedQError
from .fock import FockVector, lowering_moment, number_moment

#: Below this mean photon number Mandel Q is reported as undefined.
MEAN_TOL = 1e-12


class StatisticsClass(str, enum.Enum):
    SUB_POISSONIAN = "sub-Poissonian"
    POISSONIAN = "Poissonian"
    SUPER_POISSONIAN = "super-Poissonian"


def distribution(state: EvolvedTwoFock) -> tuple[float, float]:
    """``(P_n1, P_n2)`` of the evolved field."""
    return state.probabilities()


def mean_photon(state: EvolvedTwoFock) -> float:
    p1, p2 = state.probabilities()
    return p1 * state.spec.n1 + p2 * state.spec.n2


def second_moment(state: EvolvedTwoFock) -> float:
    p1, p2 = state.probabilities()
    return p1 * state.spec.n1 ** 2 + p2 * state.spec.n2 ** 2


def variance(state: EvolvedTwoFock) -> float:
    """Photon-number variance.

    For two components ``<n^2> - <n>^2`` equals ``p1*p2*(n2-n1)**2``; the
    product form avoids cancellation when the state is nearly pure.
    """
    p1, p2 = state.probabilities()
    return p1 * p2 * (state.spec.n2 - state.spec.n1) ** 2


def mandel_q(state: EvolvedTwoFock) -> float:
    """``Q = (Var(n) - <n>) / <n>``; -1 for a number state, 0 for Poissonian light."""
    mean = mean_photon(state)
    if mean < MEAN_TOL:
        raise UndefinedQError(f"mean photon number {mean:.3g} is zero; Q undefined")
    return variance(state) / mean - 1.0


def classify(q: float, tolerance: float = 1e-9) -> StatisticsClass:
    if q < -tolerance:
        return StatisticsClass.SUB_POISSONIAN
    if q > tolerance:
        return StatisticsClass.SUPER_POISSONIAN
    return StatisticsClass.POISSONIAN


def period_over_pi(n1: int, n2: int) -> Fraction:
    """Least period in ``phi`` of the evolved state, as an exact multiple of pi."""
    if n1 < 0 or n2 < 0:
        raise InvalidSpecError(f"photon numbers must be >= 0, got ({n1}, {n2})")
    g = math.gcd(n1, n2)
    if g == 0:
        raise InvalidSpecError("period undefined for n1 = n2 = 0")
    return Fraction(2, g)


def period(n1: int, n2: int) -> float:
    """``2*pi / gcd(n1, n2)``."""
    return float(period_over_pi(n1, n2)) * math.pi


def format_pi_multiple(frac: Fraction) -> str:
    """``Fraction(2, 5)`` -> ``'2pi/5'``; ``Fraction(1)`` -> ``'pi'``."""
    if frac == 0:
        return "0"
    num = "" if frac.numerator == 1 else str(frac.numerator)
    den = "" if frac.denominator == 1 else f"/{frac.denominator}"
    return f"{num}pi{den}"


class PurityEvent(NamedTuple):
    phi: float
    n: int


def _cos_half_vanishes(phi_over_pi: Fraction, n: int) -> bool:
    # cos(phi*n/2) == 0  <=>  (phi/pi)*n is an odd integer
    x = phi_over_pi * n
    return x.denominator == 1 and x.numerator % 2 == 1


def purity_fractions(spec: TwoFockSpec) -> list[tuple[Fraction, int]]:
    """Exact purity events over one period, as ``(phi/pi, surviving n)``.

    The state collapses onto ``|n_i>`` where ``cos(phi*n_j/2)`` vanishes for
    the other component ``j`` and ``cos(phi*n_i/2)`` does not.
    """
    span = period_over_pi(spec.n1, spec.n2)
    events = []
    for vanishing, survivor in ((spec.n1, spec.n2), (spec.n2, spec.n1)):
        if vanishing == 0:
            continue
        k = 0
        while (zero := Fraction(2 * k + 1, vanishing)) < span:
            if not _cos_half_vanishes(zero, survivor):
                events.append((zero, survivor))
            k += 1
    return sorted(events)


def purity_times(spec: TwoFockSpec) -> list[PurityEvent]:
    return [PurityEvent(float(f) * math.pi, n) for f, n in purity_fractions(spec)]


@dataclass(frozen=True)
class StatisticsSample:
    """One point of a sweep. Statistical fields are ``None`` on degenerate points."""

    phi: float
    p_n1: float | None
    p_n2: float | None
    mean_n: float | None
    var_n: float | None
    mandel_q: float | None
    degenerate: bool


@dataclass(frozen=True)
class SweepResult:
    spec: TwoFockSpec
    samples: tuple[StatisticsSample, ...]
    period: float
    purity_events: tuple[PurityEvent, ...]

    @property
    def phis(self) -> np.ndarray:
        return np.array([s.phi for s in self.samples])

    def column(self, name: str) -> np.ndarray:
        """Sample field as a float array, NaN where the field is ``None``."""
        return np.array([np.nan if (v := getattr(s, name)) is None else v for s in self.samples],
                        dtype=float)


def sample(spec: TwoFockSpec, phi: float) -> StatisticsSample:
    try:
        state = evolved_two_fock(spec, phi)
    except DegenerateEventError:
        return StatisticsSample(phi, None, None, None, None, None, True)
    p1, p2 = distribution(state)
    try:
        q = mandel_q(state)
    except UndefinedQError:
        q = None
    return StatisticsSample(phi, p1, p2, mean_photon(state), variance(state), q, False)


def sweep(spec: TwoFockSpec, phi_min: float, phi_max: float, steps: int,
          threads: int | None = 1) -> SweepResult:
    """Evaluate statistics on ``steps`` evenly spaced phases, endpoints included.

    Samples are independent; with ``threads > 1`` they are evaluated in a
    thread pool, and the result is identical to the serial one.
    """
    if steps < 2:
        raise InvalidArgumentError(f"steps must be >= 2, got {steps}")
    if not phi_min < phi_max:
        raise InvalidArgumentError(f"need phi_min < phi_max, got [{phi_min}, {phi_max}]")
    phis = [float(x) for x in np.linspace(phi_min, phi_max, steps)]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = tuple(pool.map(lambda x: sample(spec, x), phis,
                                     chunksize=max(1, steps // (4 * threads))))
    else:
        samples = tuple(sample(spec, x) for x in phis)
    return SweepResult(
        spec=spec,
        samples=samples,
        period=period(spec.n1, spec.n2),
        purity_events=tuple(purity_times(spec)),
    )


def quadrature_variances(state: FockVector) -> tuple[float, float]:
    """``(Var X, Var Y)`` for a normalized single-mode state."""
    a1 = lowering_moment(state, 1)
    a2 = lowering_moment(state, 2)
    n = number_moment(state, 1)
    var_x = (2.0 * a2.real + 2.0 * n + 1.0) / 4.0 - a1.real ** 2
    var_y = (-2.0 * a2.real + 2.0 * n + 1.0) / 4.0 - a1.imag ** 2
    return var_x, var_y


def squeezing_check(spec: TwoFockSpec, phi_grid: Sequence[float]) -> tuple[float, float]:
    """Minimum quadrature variances of the evolved field over ``phi_grid``.

    Degenerate phases are skipped. Values at or above 1/4 mean no squeezing.
    """
    min_x = min_y = math.inf
    for phi in phi_grid:
        try:
            field = evolved_two_fock(spec, phi).field()
        except DegenerateEventError:
            continue
        vx, vy = quadrature_variances(field)
        min_x, min_y = min(min_x, vx), min(min_y, vy)
    return min_x, min_y
