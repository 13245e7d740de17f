"""Exception hierarchy shared by every module in the package."""


class InsdelError(Exception):
    """Base class for all library errors."""


class InvalidInputError(InsdelError, ValueError):
    """An argument violates an operation's precondition."""


class ResourceLimitError(InsdelError):
    """An exhaustive enumeration would exceed its configured node budget.

    Raised instead of returning an answer, so "unknown" is never confused with
    "false".
    """


class ArithmeticFieldError(InsdelError, ZeroDivisionError):
    """Division by zero in a finite field."""


class DecodeFailure(InsdelError):
    """A decoder could not recover a message."""


class ConstructionFailure(InsdelError):
    """A code could not be built with the requested parameters."""


class ContractViolation(InsdelError):
    """A caller-asserted combinatorial precondition turned out to be false."""


class ParameterError(InsdelError):
    """Decoder parameters fail a mandatory soundness check at run time."""
