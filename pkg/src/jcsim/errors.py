"""Exception hierarchy.

Two families: argument errors (caller broke a precondition; CLI exit code 2)
and numerical errors (the requested quantity does not exist or did not
converge; CLI exit code 3).
"""


class JCSimError(Exception):
    """Base class for all jcsim errors."""


class InvalidArgumentError(JCSimError, ValueError):
    exit_code = 2


class TruncationError(InvalidArgumentError):
    """A photon number exceeds the Fock-space cutoff."""


class ShapeError(InvalidArgumentError):
    """Two states (or a state and a parameter set) disagree on the cutoff."""


class NormalizationError(InvalidArgumentError):
    """An operation that needs a unit-norm state received something else."""


class InvalidSpecError(InvalidArgumentError):
    pass


class NumericalError(JCSimError, ArithmeticError):
    exit_code = 3


class DegenerateStateError(NumericalError):
    """A superposition cancelled to the zero vector."""


class DegenerateEventError(NumericalError):
    """The requested measurement outcome has zero probability."""


class UndefinedQError(NumericalError):
    """Mandel Q is undefined because the mean photon number vanishes."""


class ConvergenceError(NumericalError):
    pass


class NotTwoComponentError(NumericalError):
    """A distribution is not dominated by two Fock components."""
