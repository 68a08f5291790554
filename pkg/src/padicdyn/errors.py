"""Exception hierarchy shared by all padicdyn modules."""


class PadicError(Exception):
    """Base class for every error raised by this library."""


class DivisionByZero(PadicError):
    pass


class PrecisionExhausted(PadicError):
    """Cancellation destroyed too many significant digits to trust the result."""


class DomainError(PadicError):
    """Input lies outside the domain of the requested operation."""


class ZeroInput(PadicError):
    pass


class NotASquare(PadicError):
    pass


class PoleError(PadicError):
    """Denominator indistinguishable from zero at working precision."""


class NoConvergence(PadicError):
    """An iteration exceeded its budget without stabilising."""


class ConsistencyError(PadicError):
    """An internal algebraic identity failed beyond tolerance."""


class NotAFixedPoint(PadicError):
    pass


class BranchError(PadicError):
    """Neither square-root branch satisfied the required postcondition."""


class EscapeError(PadicError):
    """An orbit left the repeller domain; carries the escape step."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"orbit escaped at step {step}")


class VerificationError(PadicError):
    """A constructed object failed its forward verification."""


class LengthMismatch(PadicError):
    pass


class ZeroPartitionFunction(PadicError):
    pass


class NoValidPlacement(PadicError):
    """No single-component placement satisfied the field equations.

    Carries the full placement diagnostics so callers can report them.
    """

    def __init__(self, diagnostics, message: str = ""):
        self.diagnostics = diagnostics
        super().__init__(message or "no component placement satisfies the field equations")
