"""
Exception hierarchy for the swirlflow solvers
"""
from typing import Optional


class SwirlFlowError(Exception):
    """Base class for every error raised by swirlflow"""


class InvalidStateError(SwirlFlowError, ValueError):
    """Inputs violate a documented precondition"""


class NoRootError(SwirlFlowError):
    """The mass-flux polynomial has no admissible root at the requested radius"""


class BracketError(SwirlFlowError):
    """A sign change could not be bracketed or the root finder did not converge"""


class SonicBoundaryError(SwirlFlowError):
    """Boundary data is exactly radial-sonic; no C1 continuation exists"""


class SonicSingularityError(SwirlFlowError):
    """The derivative system is evaluated at a radial-sonic state"""


class NotSupersonicError(SwirlFlowError):
    """A shock was requested behind a state that is not radial-supersonic"""


class PressureOutOfRangeError(SwirlFlowError):
    """The exit pressure lies outside the open admissible interval (p1, p0)"""

    def __init__(self, p_ex: float, p1: float, p0: float):
        super().__init__(
            f"exit pressure {p_ex!r} is outside the admissible interval ({p1!r}, {p0!r})"
        )
        self.p_ex = p_ex
        self.p1 = p1
        self.p0 = p0


class NoShockSolutionError(SwirlFlowError):
    """No piecewise smooth shock solution exists for the configuration"""

    def __init__(self, message: str, regime: Optional[object] = None):
        super().__init__(message)
        self.regime = regime


class ConsistencyError(SwirlFlowError):
    """A property guaranteed by the theory failed numerically"""


class ConfigError(SwirlFlowError):
    """Run configuration is missing, malformed or inconsistent"""
