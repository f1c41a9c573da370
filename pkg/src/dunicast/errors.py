"""Exception hierarchy shared by all modules."""


class DoubleUnicastError(Exception):
    """Base class for every error raised by this package."""


class CycleDetected(DoubleUnicastError, ValueError):
    pass


class NotOnPath(DoubleUnicastError, ValueError):
    pass


class EndpointMismatch(DoubleUnicastError, ValueError):
    pass


class PairDisconnected(DoubleUnicastError):
    """A unicast pair required to be connected has no path."""


class RateOutsideRegion(DoubleUnicastError, ValueError):
    pass


class CaseMismatch(DoubleUnicastError):
    """A synthesis step was invoked on a network outside its proof case."""


class PlanInfeasible(DoubleUnicastError):
    pass


class ChainStuck(DoubleUnicastError):
    pass


class ReductionStuck(DoubleUnicastError):
    pass


class Infeasible(DoubleUnicastError):
    """The network has a blocking edge, so rate (1,1) is not achievable."""


class OracleTooLarge(DoubleUnicastError):
    pass


class DomainMismatch(DoubleUnicastError, ValueError):
    pass


class InvalidCode(DoubleUnicastError, ValueError):
    pass


class BlockLengthMismatch(DoubleUnicastError, ValueError):
    pass


class UnknownInstance(DoubleUnicastError, KeyError):
    pass


class FormatError(DoubleUnicastError, ValueError):
    """A network or code file does not follow the expected layout."""
