"""Exception hierarchy for construction, classification and flexion errors."""


class ChedraError(Exception):
    """Base class for all package errors."""


class InvariantError(ChedraError):
    """Input data violates a structural invariant (positivity, monotonicity, ...)."""


class SchemaError(ChedraError):
    """A document does not match the JSON schema."""


class DiscriminantNegative(ChedraError):
    """Triangle discriminant is negative: the driving parameter left the flexion range."""


class RadicandNegative(ChedraError):
    """A square root in a tip or sublinkage formula has a negative radicand."""


class DegenerateTip(ChedraError):
    """A computed cone tip coincides with its neighbour (excluded configuration)."""


class InvalidTipConfiguration(ChedraError):
    """Tip arrangement does not define an axial map (coinciding or infeasible cones)."""


class IdealImage(ChedraError):
    """A projective map sent an affine point to infinity."""


class SingularDenominator(ChedraError):
    """A case formula divides by zero (equal bar lengths where inequality is required)."""


class MixedCases(ChedraError):
    """Sublinkages of one linkage match different flexible families."""


class NotFlexibleError(ChedraError):
    """A net build was requested for data that classifies as not flexible."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class NonSimpleFan(InvariantError):
    """Meridian plane angles are not strictly monotone."""


class IncompatibleChaining(ChedraError):
    """Consecutive strip triples do not share row data consistently."""


class AngleUnsolvable(ChedraError):
    """Meridian angle increment has |cos| > 1: angular flexion limit reached."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class ClosureFailure(ChedraError):
    """Parallel quad closure is degenerate or a scale factor is not positive."""


class InadmissibleSample(ChedraError):
    """Curve sampling produced non-positive distances or a non-monotone angle."""


class ShapeMismatch(ChedraError):
    """Two grids that should be combinatorially identical are not."""


class SolverDiverged(ChedraError):
    """The closure root solve of the foldability oracle did not converge."""


class OutOfRange(ChedraError):
    """Requested driving parameter lies outside the admissible interval."""

    def __init__(self, message, nearest=None):
        super().__init__(message)
        self.nearest = nearest
