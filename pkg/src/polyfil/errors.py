"""Exception types shared across the package."""


class PolyfilError(Exception):
    """Base class for all package-specific errors."""


class NotCoprime(PolyfilError, ValueError):
    """A modulus pair that must be coprime is not."""


class OddLength(PolyfilError, ValueError):
    """An alternating form needs an even, positive number of components."""


class ComponentCollision(PolyfilError, ValueError):
    """Two components of an index vector coincide after reduction."""


class RangeError(PolyfilError, ValueError):
    """A parameter is outside its documented range."""


class ComplexityBudgetExceeded(PolyfilError, RuntimeError):
    """The planned enumeration exceeds the configured summand budget."""


class NonUnitAxis(PolyfilError, ValueError):
    """A rotation axis is not a unit vector."""


class NonUnitSpinor(PolyfilError, ValueError):
    """A spinor (unit quaternion) has drifted off the unit sphere."""


class UndefinedTheta(PolyfilError, ValueError):
    """The argument of a vanishing Gauss sum was requested."""


class InternalVanishing(PolyfilError, ArithmeticError):
    """A reference Gauss sum that must not vanish did; signals an
    inconsistency in the even-parity bookkeeping."""


class NotARotation(PolyfilError, ValueError):
    """A matrix failed the orthogonality / determinant / trace checks."""


class CrossCheckFailure(PolyfilError, RuntimeError):
    """The matrix-level and quaternion-level products disagree."""


class GridNotDivisible(PolyfilError, ValueError):
    """The spatial grid is not divisible by the required block count."""


class BlowUp(PolyfilError, ArithmeticError):
    """A sample norm left [0.5, 2] before renormalization; the time step
    is unstable.  Reduce dt_factor or refine the grid."""
