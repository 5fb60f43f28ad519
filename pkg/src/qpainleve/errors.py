"""Exception hierarchy.

Two families: ``ValidationError`` for bad inputs (CLI exit code 2) and
``NumericalError`` for failures of a numerical procedure on valid input
(CLI exit code 3).
"""


class QPainleveError(Exception):
    exit_code = 1


class ValidationError(QPainleveError, ValueError):
    exit_code = 2


class NumericalError(QPainleveError, ArithmeticError):
    exit_code = 3


class SingularSpectralParam(ValidationError):
    """lambda = 0 while the c/(4 lambda) term of the A matrix is needed."""


class DegenerateLambda(ValidationError):
    """lambda = 0: the pole lattice of the closed form collapses."""


class TooFewSamples(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class EmptyGrid(ValidationError):
    pass


class UnknownSchema(ValidationError):
    pass


class NearPole(NumericalError):
    def __init__(self, z):
        self.z = z
        super().__init__(f"evaluation point {z!r} is within the pole guard")


class BlowUp(NumericalError):
    """Integration hit a movable pole (or the step size collapsed)."""

    def __init__(self, z_at, reason="magnitude guard exceeded"):
        self.z_at = z_at
        self.reason = reason
        super().__init__(f"blow-up near z={z_at!r}: {reason}")


class SingularStep(NumericalError):
    pass


class NoBoundState(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass
