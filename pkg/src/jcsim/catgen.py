"""Two-Fock superpositions from the N-atom cat-state scheme.

After ``N`` atoms cross a cavity prepared in the coherent state ``|alpha>``,
the field amplitude on ``|n>`` is proportional to

    alpha**n * ((-1)**n +/- 1) / sqrt(n!) * sum_{j=0}^{M-1} exp(i*pi*n*j/M),   M = 2**(N-1)

with ``+`` for the even family and ``-`` for the odd one. The geometric
phase sum vanishes for even ``n`` unless ``n`` is a multiple of ``2M``,
which concentrates the even family on ``n = 0, 2**N, 2*2**N, ...``.

Probabilities are normalized numerically. :func:`beta_reference` evaluates
the closed-form normalization series term by term, for diagnostics only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .dispersive import TwoFockSpec
from .errors import ConvergenceError, InvalidArgumentError, NotTwoComponentError, NumericalError

MAX_CUTOFF = 4096
TAIL_TOL = 1e-10


class Parity(enum.IntEnum):
    EVEN = 1
    ODD = -1

    @classmethod
    def parse(cls, value: str | int | Parity) -> Parity:
        if isinstance(value, str):
            key = value.strip().lower()
            aliases = {"even": cls.EVEN, "+": cls.EVEN, "odd": cls.ODD, "-": cls.ODD}
            if key not in aliases:
                raise InvalidArgumentError(f"unknown parity {value!r}")
            return aliases[key]
        return cls(value)


@dataclass(frozen=True)
class CatSpec:
    atoms: int
    alpha: float
    parity: Parity = Parity.EVEN
    cutoff: int = 64

    def __post_init__(self):
        if self.atoms < 1:
            raise InvalidArgumentError(f"need at least one atom, got {self.atoms}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise InvalidArgumentError(f"alpha must be positive and finite, got {self.alpha}")
        if not 0 <= self.cutoff <= MAX_CUTOFF:
            raise InvalidArgumentError(f"cutoff must lie in [0, {MAX_CUTOFF}], got {self.cutoff}")
        object.__setattr__(self, "parity", Parity.parse(self.parity))

    @property
    def phase_terms(self) -> int:
        """Number of terms ``2**(N-1)`` in the geometric phase sum."""
        return 2 ** (self.atoms - 1)


@dataclass(frozen=True, eq=False)
class CatDistribution:
    """``P(n)`` for ``n = 0..spec.cutoff``; ``spec.cutoff`` is the converged cutoff."""

    spec: CatSpec
    probabilities: np.ndarray
    normalization_mode: str = "numeric"

    def probability(self, n: int) -> float:
        return float(self.probabilities[n]) if 0 <= n < len(self.probabilities) else 0.0

    def total(self) -> float:
        return math.fsum(self.probabilities)

    def as_dict(self) -> dict[int, float]:
        return {n: float(p) for n, p in enumerate(self.probabilities) if p > 0.0}


def _phase_sum_sq(n: np.ndarray, m: int) -> np.ndarray:
    """``|sum_{j<m} exp(i*pi*n*j/m)|**2`` with exact zeros."""
    out = np.zeros(n.shape, dtype=float)
    even = n % 2 == 0
    out[even & (n % (2 * m) == 0)] = float(m * m)
    odd = ~even
    # ratio r = exp(i*pi*n/m) has r**m = -1, so the sum is 2/(1 - r)
    out[odd] = 1.0 / np.sin(np.pi * n[odd] / (2 * m)) ** 2
    return out


def _log_weights(spec: CatSpec, nmax: int) -> np.ndarray:
    n = np.arange(nmax + 1)
    parity_ok = (n % 2 == 0) == (spec.parity is Parity.EVEN)
    s2 = _phase_sum_sq(n, spec.phase_terms)
    keep = parity_ok & (s2 > 0)
    logw = np.full(n.shape, -np.inf)
    nk = n[keep]
    # ((-1)^n +/- 1)^2 = 4 on the allowed parity
    logw[keep] = 2 * nk * math.log(spec.alpha) - gammaln(nk + 1) + math.log(4.0) + np.log(s2[keep])
    return logw


def unnormalized_weight(spec: CatSpec, n: int) -> float:
    """``|<n|Psi>|**2`` without the n-independent prefactor."""
    if not 0 <= n <= spec.cutoff:
        raise InvalidArgumentError(f"n={n} outside [0, {spec.cutoff}]")
    return float(np.exp(_log_weights(spec, n)[n]))


def _beta1(x: float, parity: Parity) -> float:
    return 0.5 * (math.exp(x) + parity * math.exp(-x))


def beta_reference(atoms: int, alpha_sq: float, parity: Parity | str) -> float:
    """Closed-form normalization series, evaluated term by term without correction.

    Not used for normalization; for ``atoms > 1`` it disagrees with the
    numerical sum of the weights (see :func:`beta_discrepancy`).
    """
    parity = Parity.parse(parity)
    if atoms < 1:
        raise InvalidArgumentError(f"need at least one atom, got {atoms}")
    if atoms == 1:
        return _beta1(alpha_sq, parity)
    m = 2 ** (atoms - 1)
    series = math.fsum(
        (2 ** atoms - 2 * k)
        * math.cos(alpha_sq * math.sin(math.pi * k / m))
        * _beta1(alpha_sq * math.cos(math.pi * k / m), parity)
        for k in range(m)
    )
    return _beta1(alpha_sq, parity) / m + series / m ** 2


def _weights(spec: CatSpec, nmax: int) -> tuple[np.ndarray, float]:
    """Max-shifted weights and the shift (log scale)."""
    logw = _log_weights(spec, nmax)
    shift = float(np.max(logw))
    return np.exp(logw - shift), shift


def beta_discrepancy(spec: CatSpec) -> float:
    """Ratio of the numerical weight sum to ``2**(2N) * beta_reference``; 1 when they agree."""
    dist = distribution(spec)
    w, shift = _weights(dist.spec, dist.spec.cutoff)
    log_total = math.log(math.fsum(w)) + shift
    beta = beta_reference(spec.atoms, spec.alpha ** 2, spec.parity)
    if not beta > 0.0:
        return math.inf
    return math.exp(log_total - 2 * spec.atoms * math.log(2.0) - math.log(beta))


def distribution(spec: CatSpec, normalization: str = "numeric") -> CatDistribution:
    """Photon-number distribution, normalized over a converged cutoff.

    The cutoff starts at ``spec.cutoff`` and doubles until the weight in
    ``(cutoff, 2*cutoff]`` is below ``1e-10`` of the total. With
    ``normalization="beta-reference"`` the weights are divided by
    ``2**(2N) * beta_reference`` instead, so they need not sum to one.
    """
    if normalization not in ("numeric", "beta-reference"):
        raise InvalidArgumentError(f"unknown normalization {normalization!r}")
    cutoff = max(spec.cutoff, 1)
    while True:
        if cutoff > MAX_CUTOFF:
            raise ConvergenceError(
                f"tail mass did not fall below {TAIL_TOL} before cutoff {MAX_CUTOFF}")
        w, shift = _weights(spec, 2 * cutoff)
        total = math.fsum(w)
        if math.fsum(w[cutoff + 1:]) <= TAIL_TOL * total:
            break
        cutoff *= 2
    w = w[:cutoff + 1]
    if normalization == "numeric":
        probs = w / math.fsum(w)
    else:
        beta = beta_reference(spec.atoms, spec.alpha ** 2, spec.parity)
        if not beta > 0.0:
            raise NumericalError(f"beta reference is {beta!r}; cannot normalize")
        log_norm = 2 * spec.atoms * math.log(2.0) + math.log(beta)
        probs = w * math.exp(shift - log_norm)
    probs.setflags(write=False)
    return CatDistribution(replace(spec, cutoff=cutoff), probs, normalization)


def dominant_components(dist: CatDistribution, k: int = 2) -> list[int]:
    """The ``k`` most probable photon numbers, most probable first (ties: smaller n)."""
    if k < 1:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    nonzero = [(float(p), n) for n, p in enumerate(dist.probabilities) if p > 0.0]
    nonzero.sort(key=lambda t: (-t[0], t[1]))
    return [n for _, n in nonzero[:k]]


def as_two_fock_spec(dist: CatDistribution, min_fraction: float = 0.9) -> TwoFockSpec:
    """Approximate the distribution by its two dominant components."""
    top = dominant_components(dist, 2)
    if len(top) < 2:
        raise NotTwoComponentError(f"only {len(top)} nonzero component(s)")
    captured = sum(dist.probability(n) for n in top) / dist.total()
    if captured < min_fraction:
        raise NotTwoComponentError(
            f"top two components {sorted(top)} carry {captured:.3f} < {min_fraction} of the mass")
    n1, n2 = sorted(top)
    return TwoFockSpec.from_weights(n1, n2, dist.probability(n1), dist.probability(n2))


def coherent_distribution(alpha: float, cutoff: int) -> np.ndarray:
    """Poisson photon statistics of ``|alpha>`` on ``n = 0..cutoff`` (not renormalized)."""
    return poisson.pmf(np.arange(cutoff + 1), alpha ** 2)
