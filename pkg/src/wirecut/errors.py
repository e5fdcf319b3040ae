"""Exception hierarchy shared across the package."""


class WirecutError(Exception):
    """Base class for all wirecut errors."""


class InvalidInputError(WirecutError, ValueError):
    """Arguments violate a documented precondition."""


class ResourceLimitError(WirecutError, ValueError):
    """Problem size exceeds a hard desk-scale guard (qubit counts, widths)."""


class SynthesisError(WirecutError, RuntimeError):
    """Circuit synthesis failed; the family violates the Z-disjointness condition."""


class DesignViolationError(WirecutError, ValueError):
    """A supplied unitary ensemble is not a 2-design (residual above tolerance)."""


class NumericFailureError(WirecutError, ArithmeticError):
    """Floating-point error beyond the tolerated clipping threshold."""
