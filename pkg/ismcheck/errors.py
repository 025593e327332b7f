"""
Exception hierarchy for ismcheck
"""

from typing import Any, Optional


class IsmCheckError(Exception):
    """Base class for every error raised by ismcheck"""


class UsageError(IsmCheckError, ValueError):
    """A precondition of a public operation was violated"""


class LengthMismatch(UsageError):
    """A sized vector's declared length disagrees with its items"""

    def __init__(self, declared: int, actual: int):
        self.declared = declared
        self.actual = actual
        super().__init__(f"Mismatch between: {actual} and {declared}.")


class GuardViolation(UsageError):
    """An operation was built without the evidence its guard requires"""


class GenerationError(IsmCheckError):
    """A model's option generator could not produce a valid operation"""


class TraceInvariantError(IsmCheckError):
    """A trace step or trace failed its constructor checks"""


class ProgramDefinitionError(IsmCheckError):
    """A program is malformed, or its environment answered out of domain"""


class OracleError(IsmCheckError):
    """The oracle cannot analyse the requested model or depth"""


def mismatch_terms(expected: Any, actual: Any) -> tuple[str, str]:
    """Smallest differing subterms of two states, as the type checker reports them"""
    fields = getattr(type(expected), "__dataclass_fields__", None)
    if fields is not None and type(expected) is type(actual):
        for name in fields:
            left, right = getattr(expected, name), getattr(actual, name)
            if _is_hole(left) or left == right:
                continue
            return mismatch_terms(left, right)
    return str(expected), str(actual)


def _is_hole(value: Any) -> bool:
    return getattr(value, "is_hole", False) is True


class TransitionMismatch(IsmCheckError):
    """A program step was attempted from a state its operation does not accept"""

    def __init__(self, expected: Any, actual: Any, op: Any = None, trace: Any = None):
        self.expected = expected
        self.actual = actual
        self.op = op
        self.trace = trace
        left, right = mismatch_terms(expected, actual)
        message = f"Mismatch between: {left} and {right}."
        if op is not None:
            message += f" (while running '{op}' from {actual})"
        super().__init__(message)


class FuelExhausted(IsmCheckError):
    """A program did not return within its step budget"""

    def __init__(self, fuel: int, trace: Any = None):
        self.fuel = fuel
        self.trace = trace
        super().__init__(f"Program did not return within {fuel} steps")


class ProgramHoleReached(IsmCheckError):
    """Execution reached a branch that was never written"""

    def __init__(self, name: str, state: Optional[Any] = None):
        self.name = name
        self.state = state
        super().__init__(f"Reached unfinished branch ?{name} in state {state}")
