"""Exception types shared across the library."""


class PolyKernelError(Exception):
    """Base class for every error raised by this package."""


# --- scalar special functions ---------------------------------------------

class PoleError(PolyKernelError):
    """Evaluation requested exactly at (or too close to) a pole."""


class ParameterPoleError(PolyKernelError):
    """A lower hypergeometric parameter hits a non-positive integer."""


class ConvergenceError(PolyKernelError):
    """A series failed to reach the requested tolerance in the term budget."""


class SlowConvergenceError(PolyKernelError):
    """Argument too close to a singular point for full-accuracy summation."""


class NonTerminatingError(PolyKernelError):
    """A 3F2 at unit argument was requested without a terminating parameter."""


class ZeroParameterError(PolyKernelError):
    """Gegenbauer order 0 requested; use the Chebyshev limit instead."""


class DomainError(PolyKernelError):
    """Argument outside the function's real domain."""


# --- kernels ---------------------------------------------------------------

class OddDimensionError(PolyKernelError):
    """The logarithmic-branch constant is only defined for even dimension."""


class CoincidentPointsError(PolyKernelError):
    """The two evaluation points coincide."""


class SingularConfigurationError(PolyKernelError):
    """Geometry sits on (or too near) the kernel's singular set."""


class AxisError(PolyKernelError):
    """A point lies on the rotation axis, so the azimuth is undefined."""


class CoincidentRadiusError(PolyKernelError):
    """r and r' are too close, collapsing the radial expansion argument to 1."""


class ExclusionSetError(PolyKernelError):
    """The power parameter lies in the expansion's excluded set."""


# --- polyspherical trees ---------------------------------------------------

class TreeParseError(PolyKernelError):
    """Base for naming-language parse failures; carries the token position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at token position {position})")
        self.position = position


class UnexpectedEnd(TreeParseError):
    pass


class TrailingTokens(TreeParseError):
    pass


class ZeroExponent(TreeParseError):
    pass


class UnknownToken(TreeParseError):
    pass


class AngleRangeError(PolyKernelError):
    """An angle lies outside its node type's range."""


class InadmissibleKeyError(PolyKernelError):
    """Quantum numbers violate a branching-node admissibility constraint."""
