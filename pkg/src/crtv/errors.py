"""Exception hierarchy shared across the package."""


class CrtvError(Exception):
    """Base class for every error this package raises deliberately."""


class UniverseMismatchError(CrtvError):
    """Operands refer to different variable universes."""


class ParseError(CrtvError):
    """Syntax or name-resolution failure in a polynomial expression."""

    def __init__(self, message, text="", pos=0):
        super().__init__(message)
        self.message = message
        self.text = text
        self.pos = pos

    def __str__(self):
        if not self.text:
            return self.message
        caret = " " * self.pos + "^"
        return f"{self.message} (column {self.pos + 1})\n  {self.text}\n  {caret}"


class ProblemFormatError(CrtvError):
    """A problem file is malformed (missing keys, wrong shapes)."""


class HypersurfaceError(CrtvError):
    """A defining polynomial violates a hypersurface invariant."""


class NotThroughOriginError(HypersurfaceError):
    pass


class NotHermitianError(HypersurfaceError):
    pass


class ZeroGradientError(HypersurfaceError):
    pass


class PointNotOnHypersurfaceError(HypersurfaceError):
    pass


class DegenerateImplicitError(CrtvError):
    """Implicit solving requested at a point with degenerate linear part."""


class NonPolynomialRestrictionError(CrtvError):
    """Exact restriction to the complexified hypersurface is unavailable;
    the graph solution is a genuine power series."""


class MapDoesNotPreserveError(CrtvError):
    """The pullback of the target defining polynomial is not divisible by
    the source one: the map does not send M into M' (or rho is reducible
    and only one branch is preserved).  Carries the nonzero remainder."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class DegreeCapExceededError(CrtvError):
    """A basis element exceeded the configured degree cap."""


class InternalConsistencyError(CrtvError):
    """A cross-check that must hold mathematically failed; this is a bug,
    never a property of the input."""
