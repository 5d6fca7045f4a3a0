"""Exception types shared across the package."""


class PlaneAlgebraError(Exception):
    """Base class for all domain errors raised by planealg."""


class PolyParseError(PlaneAlgebraError):
    """Raised when a polynomial / vector-field / map string does not parse.

    Carries the offending text, the 0-based position of the failure and a
    short description of what was expected there.
    """

    def __init__(self, text: str, position: int, expected: str):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(
            f"parse error at position {position}: expected {expected} "
            f"in {text!r}"
        )


class NonZeroDivergence(PlaneAlgebraError):
    """A divergence-free vector field was required."""

    def __init__(self, divergence):
        self.divergence = divergence
        super().__init__(f"vector field has nonzero divergence {divergence}")


class BracketNotConstant(PlaneAlgebraError):
    """The bracket of a pair was required to be a nonzero constant."""

    def __init__(self, bracket):
        self.bracket = bracket
        super().__init__(f"bracket is not a nonzero constant: {bracket}")


class DegenerateSpan(PlaneAlgebraError):
    """A span had lower dimension than its construction requires."""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"span has dimension {actual}, expected {expected}")


class ZeroScale(PlaneAlgebraError):
    """The graded rescaling parameter must be nonzero."""


class CapExceeded(PlaneAlgebraError):
    """A closure / reduction computation hit one of its caps.

    ``partial`` holds whatever was computed before the cap was hit.
    """

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class NotClosed(PlaneAlgebraError):
    """A span is not closed under the bracket.

    ``i``, ``j`` index the offending basis pair and ``bracket`` is the
    element that escapes the span.
    """

    def __init__(self, i: int, j: int, bracket):
        self.i = i
        self.j = j
        self.bracket = bracket
        super().__init__(
            f"bracket of basis elements {i} and {j} lies outside the span"
        )


class NotAnAutomorphism(PlaneAlgebraError):
    """Inversion was requested for a map that is not an automorphism."""
