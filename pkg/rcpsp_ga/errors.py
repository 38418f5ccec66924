"""
    Exceptions raised by the solver. Everything derives from RcpspError; value-type problems
    also derive from ValueError.
"""


class RcpspError(Exception):
    """Base class of all solver errors."""


class InvalidInstanceError(RcpspError, ValueError):
    """The instance violates a model invariant; `report` lists every violation."""

    def __init__(self, report, message=None):
        self.report = report
        if message is None:
            message = "invalid instance: " + "; ".join(v.message for v in report)
        super().__init__(message)


class InstanceFormatError(RcpspError, ValueError):
    """A native document could not be read. `where` is 'line X column Y' or a JSON path."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class PsplibFormatError(RcpspError, ValueError):
    """A PSPLIB file could not be read; `kind` is missing-section, count-mismatch or non-numeric."""

    def __init__(self, message, kind, line=None):
        self.kind = kind
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InfeasibleListError(RcpspError, ValueError):
    """The activity list is not a precedence-feasible permutation."""


class OperatorError(RcpspError, ValueError):
    """A genetic operator received invalid cuts, indices or parents."""


class DegenerateInstanceError(RcpspError, ValueError):
    """Every duration is zero, so the makespan reciprocal is undefined."""


class ConfigError(RcpspError, ValueError):
    """A GA, sweep or generator setting is out of range."""


class OracleSizeError(RcpspError):
    """Exhaustive enumeration would exceed the visit cap."""
