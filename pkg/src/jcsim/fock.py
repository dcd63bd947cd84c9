"""Sparse, truncated single-mode Fock-space states.

A :class:`FockVector` stores complex amplitudes keyed by photon number.
Every state carries its own cutoff, and every binary operation checks that
the cutoffs agree. Global phases are kept as-is; compare states with
:func:`fidelity` rather than by amplitudes.
"""

from __future__ import annotations

import cmath
import math
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    DegenerateStateError,
    InvalidArgumentError,
    NormalizationError,
    ShapeError,
    TruncationError,
)

#: Amplitudes with magnitude below this are dropped on construction.
PRUNE_THRESHOLD = 1e-15
#: Tolerance on the squared norm for a state to count as normalized.
NORM_TOL = 1e-12


class FockVector:
    """Immutable field state ``sum_n a_n |n>`` with ``0 <= n <= cutoff``.

    Parameters
    ----------
    amplitudes : mapping of int -> complex
        Nonzero amplitudes. Entries below ``prune`` in magnitude are dropped.
    cutoff : int
        Largest representable photon number.
    prune : float, optional
        Pruning threshold on amplitude magnitude.
    """

    __slots__ = ("_amps", "_cutoff")

    def __init__(self, amplitudes: Mapping[int, complex], cutoff: int,
                 prune: float = PRUNE_THRESHOLD):
        cutoff = int(cutoff)
        if cutoff < 0:
            raise InvalidArgumentError(f"cutoff must be >= 0, got {cutoff}")
        amps = {}
        for n, a in amplitudes.items():
            n = int(n)
            if n < 0:
                raise InvalidArgumentError(f"photon number must be >= 0, got {n}")
            if n > cutoff:
                raise TruncationError(f"photon number {n} exceeds cutoff {cutoff}")
            a = complex(a)
            if not cmath.isfinite(a):
                raise InvalidArgumentError(f"non-finite amplitude at n={n}: {a}")
            if abs(a) >= prune:
                amps[n] = a
        norm_sq = math.fsum(abs(a) ** 2 for a in amps.values())
        if norm_sq > 1.0 + NORM_TOL:
            raise NormalizationError(f"squared norm {norm_sq!r} exceeds 1")
        self._amps = MappingProxyType(dict(sorted(amps.items())))
        self._cutoff = cutoff

    @property
    def amplitudes(self) -> Mapping[int, complex]:
        return self._amps

    @property
    def cutoff(self) -> int:
        return self._cutoff

    def __getitem__(self, n: int) -> complex:
        return self._amps.get(n, 0j)

    def __iter__(self) -> Iterator[tuple[int, complex]]:
        return iter(self._amps.items())

    def __len__(self) -> int:
        return len(self._amps)

    def __repr__(self) -> str:
        terms = ", ".join(f"{n}: {a:.6g}" for n, a in self._amps.items())
        return f"FockVector({{{terms}}}, cutoff={self._cutoff})"

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._amps)

    def norm_sq(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._amps.values())

    @property
    def normalized(self) -> bool:
        return abs(self.norm_sq() - 1.0) <= NORM_TOL

    def probability(self, n: int) -> float:
        return abs(self[n]) ** 2

    def scaled(self, factor: complex) -> FockVector:
        return FockVector({n: factor * a for n, a in self._amps.items()}, self._cutoff)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self._cutoff + 1, dtype=complex)
        for n, a in self._amps.items():
            out[n] = a
        return out

    @classmethod
    def from_dense(cls, vector: Iterable[complex]) -> FockVector:
        vec = np.asarray(vector, dtype=complex)
        return cls(dict(enumerate(vec)), len(vec) - 1)


def make_fock(n: int, cutoff: int) -> FockVector:
    """Number state ``|n>`` in a space truncated at ``cutoff``."""
    if n > cutoff:
        raise TruncationError(f"photon number {n} exceeds cutoff {cutoff}")
    return FockVector({n: 1.0}, cutoff)


def _check_same_cutoff(*states: FockVector) -> int:
    cutoffs = {s.cutoff for s in states}
    if len(cutoffs) != 1:
        raise ShapeError(f"cutoff mismatch: {sorted(cutoffs)}")
    return cutoffs.pop()


def combine(terms: Iterable[tuple[complex, FockVector]]) -> dict[int, complex]:
    """Raw linear combination as an amplitude dict (no normalization)."""
    terms = list(terms)
    if not terms:
        raise InvalidArgumentError("empty superposition")
    _check_same_cutoff(*(v for _, v in terms))
    acc: dict[int, complex] = {}
    for coeff, vec in terms:
        for n, a in vec:
            acc[n] = acc.get(n, 0j) + complex(coeff) * a
    return acc


def superpose(terms: Iterable[tuple[complex, FockVector]]) -> FockVector:
    """Normalized linear combination of states sharing one cutoff.

    >>> superpose([(1, make_fock(1, 4)), (1, make_fock(3, 4))]).amplitudes[1]
    (0.7071067811865475+0j)
    """
    terms = list(terms)
    acc = combine(terms)
    norm_sq = math.fsum(abs(a) ** 2 for a in acc.values())
    if norm_sq < NORM_TOL:
        raise DegenerateStateError("superposition has zero norm")
    scale = 1.0 / math.sqrt(norm_sq)
    return FockVector({n: a * scale for n, a in acc.items()}, terms[0][1].cutoff)


def inner_product(a: FockVector, b: FockVector) -> complex:
    """``<a|b>``, conjugate-linear in the first argument."""
    _check_same_cutoff(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for n in small.support:
        if n in large.amplitudes:
            total += a[n].conjugate() * b[n]
    return total


def fidelity(a: FockVector, b: FockVector) -> float:
    """Phase-insensitive overlap ``|<a|b>|^2 / (<a|a><b|b>)``."""
    denom = a.norm_sq() * b.norm_sq()
    if denom == 0.0:
        raise DegenerateStateError("fidelity with a zero vector")
    return abs(inner_product(a, b)) ** 2 / denom


def require_normalized(state: FockVector) -> None:
    if not state.normalized:
        raise NormalizationError(f"state not normalized (norm^2 = {state.norm_sq()!r})")


def number_moment(state: FockVector, k: int, *, check_norm: bool = True) -> float:
    """``sum_n n**k |a_n|**2``.

    With ``check_norm=False`` the raw sum is returned for sub-normalized
    vectors (e.g. one branch of a joint atom-field state).
    """
    if k < 1:
        raise InvalidArgumentError(f"moment order must be positive, got {k}")
    if check_norm:
        require_normalized(state)
    return math.fsum(n ** k * abs(a) ** 2 for n, a in state)


def lowering_moment(state: FockVector, k: int = 1) -> complex:
    """``<a^k>`` for the annihilation operator ``a``."""
    require_normalized(state)
    total = 0j
    for n, amp in state:
        if n < k:
            continue
        lower = state[n - k]
        if lower:
            # a^k |n> = sqrt(n!/(n-k)!) |n-k>
            total += lower.conjugate() * amp * math.sqrt(math.perm(n, k))
    return total
