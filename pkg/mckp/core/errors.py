"""Structured errors raised by the solver suite.

Everything derives from MckpError, itself a ValueError, so callers that only
care about "bad data" can keep catching ValueError.
"""


class MckpError(ValueError):
    pass


# instance validation
class EmptyInstance(MckpError):
    pass


class EmptyGroup(MckpError):
    pass


class NegativeValue(MckpError):
    pass


class IndexOutOfRange(MckpError, IndexError):
    pass


# solvers
class DegenerateObjective(MckpError):
    """Profit and cost optima coincide, the perturbation weights are undefined."""


class DegenerateGeometry(MckpError):
    pass


class IterationLimit(MckpError):
    pass


class TooLarge(MckpError):
    pass


class InfeasibleInstance(MckpError):
    pass


class NonIntegralData(MckpError):
    pass


class MemoryBudgetExceeded(MckpError):
    pass


# instance files
class ParseError(MckpError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VersionMismatch(ParseError):
    pass
