"""Exception types shared across the package.

Precondition violations subclass ValueError so callers can treat them as
usage errors; numeric failures (non-convergence, overflow guards) subclass
RuntimeError/ArithmeticError and map to a distinct CLI exit code.
"""


class NonSquareError(ValueError):
    """Input grid is not square."""


class NotHermitianError(ValueError):
    """Conjugate-symmetry defect exceeds the stated tolerance."""


class DimMismatchError(ValueError):
    """Operands have incompatible dimensions."""


class NotPsdError(ValueError):
    """Matrix required to be positive semidefinite is not."""


class BadExponentError(ValueError):
    """Moment/norm exponent p below 1."""


class BadSigmaError(ValueError):
    """Deviation scale sigma must be positive."""


class BadBoundError(ValueError):
    """Vector bound M must be positive."""


class BadConstantError(ValueError):
    """Universal constant C must be positive."""


class TooManyTermsError(ValueError):
    """Family too large for exhaustive sign enumeration."""


class EmptyInputError(ValueError):
    """A non-empty sample list is required."""


class LengthMismatchError(ValueError):
    """Sample vectors have unequal lengths."""


class DegenerateDrawError(RuntimeError):
    """Sphere sampling rejected too many near-zero Gaussian vectors."""


class NoConvergenceError(RuntimeError):
    """Jacobi eigensolver exceeded its sweep cap."""


class OverflowGuardError(ArithmeticError):
    """An exponential would exceed the double-precision range."""


class QuadratureMismatchError(ArithmeticError):
    """Closed form and quadrature disagree beyond tolerance."""
