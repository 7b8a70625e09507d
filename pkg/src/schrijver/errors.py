class SchrijverError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(SchrijverError, ValueError):
    """An operation was called outside its domain."""


class NotStableError(PreconditionError):
    """A set is not a stable subset of the ground set it was checked against."""


class BudgetExceeded(SchrijverError):
    """An exhaustive enumeration would exceed the caller's budget."""


class PremiseError(PreconditionError):
    """The premises of a bound checker do not hold for the given input."""


class OracleError(SchrijverError):
    """Failure talking to a coloring oracle."""


class OracleContractError(OracleError):
    """The oracle returned an out-of-palette or inconsistent color."""


class OracleProtocolError(OracleError):
    """An external oracle broke the line protocol, timed out or died."""
