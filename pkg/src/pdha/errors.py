"""Exception hierarchy for the pdha package."""


class PdhaError(Exception):
    """Base class for every error raised by this package."""


class NumericalFailure(PdhaError):
    """Root of the errors that map to CLI exit code 2."""


class UnsupportedOrder(PdhaError):
    pass


class DomainError(PdhaError, ValueError):
    pass


class DegenerateBC(PdhaError, ValueError):
    pass


class NonFinitePotential(PdhaError, ValueError):
    pass


class SingularExponent(PdhaError, ValueError):
    pass


class ResonantCase(PdhaError, ValueError):
    """c_hat == 2: the quadratic particular solution does not exist."""


class UnsolvableBoundaryData(NumericalFailure):
    pass


class ZeroExponent(PdhaError, ValueError):
    pass


class NonPositiveLandscape(NumericalFailure):
    pass


class SingularSystem(NumericalFailure):
    pass


class StepFailure(NumericalFailure):
    pass


class BracketExhausted(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass


class GridMismatch(PdhaError, ValueError):
    pass


class UnknownFigure(PdhaError, KeyError):
    pass
