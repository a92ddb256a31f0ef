"""Exception hierarchy.

Three families map onto the CLI exit codes: configuration/model errors (1),
precondition errors (2) and numerical failures (3).
"""


class RslouError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


# -- configuration and model validation -------------------------------------


class ConfigError(RslouError, ValueError):
    exit_code = 1


class ModelError(ConfigError):
    pass


class RowSumViolation(ModelError):
    pass


class NegativeOffDiagonal(ModelError):
    pass


class DimensionMismatch(ModelError):
    pass


class TooFewStates(ModelError):
    pass


class NonPositiveA(ModelError):
    pass


class InvalidMeasureParams(ModelError):
    pass


class NotIrreducible(ModelError):
    pass


# -- preconditions -------------------------------------------------------------


class PreconditionError(RslouError):
    exit_code = 2


class PreconditionAlphaSign(PreconditionError):
    pass


class PreconditionNotRecurrent(PreconditionError):
    pass


class PreconditionEpsilon(PreconditionError):
    pass


class PreconditionDelta(PreconditionError):
    pass


class DivergentExponent(PreconditionError):
    """The Levy exponent was requested off the real axis where the
    exponential moment of the measure is infinite (a heavy-tail signal)."""


class DegenerateKappa(PreconditionError):
    """The set {p > 0 : eta_p > 0} is empty, so the moment index collapses
    to 0+ and no bisection bracket exists."""


# -- numerical failures --------------------------------------------------------


class NumericalError(RslouError):
    exit_code = 3


class SingularSystem(NumericalError):
    pass


class EigensolverFailure(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class QuadratureInconclusive(NumericalError):
    pass


class QuadratureBudgetExceeded(NumericalError):
    pass


class SlowDecay(NumericalError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class DegenerateSample(NumericalError):
    pass


class NonFiniteState(NumericalError):
    def __init__(self, message, time=None, state=None):
        super().__init__(message)
        self.time = time
        self.state = state


class IoFailure(NumericalError):
    pass
