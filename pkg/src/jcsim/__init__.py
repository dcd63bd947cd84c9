"""Dispersive Jaynes-Cummings simulator.

Two-Fock field states evolved by a dispersively coupled atom, their photon
statistics, cat-state preparation of the initial superpositions, and an
exact Jaynes-Cummings oracle for checking the dispersive approximation.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DegenerateEventError,
    DegenerateStateError,
    InvalidArgumentError,
    InvalidSpecError,
    JCSimError,
    NormalizationError,
    NotTwoComponentError,
    NumericalError,
    ShapeError,
    TruncationError,
    UndefinedQError,
)
from .fock import FockVector, fidelity, inner_product, make_fock, number_moment, superpose  # noqa: E402
from .dispersive import (  # noqa: E402
    AtomFieldState,
    AtomLevel,
    EvolvedTwoFock,
    TwoFockSpec,
    entangle,
    evolved_two_fock,
    phase_evolve,
    project_atom,
    ramsey,
)
