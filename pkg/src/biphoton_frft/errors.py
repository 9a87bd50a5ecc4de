"""Exception hierarchy shared by all modules."""


class BiphotonError(Exception):
    """Base class for library errors."""


class NumericError(BiphotonError):
    """A computation cannot be carried out with the given numerics."""


class ConfigError(BiphotonError):
    """Invalid user-supplied configuration."""


class DegenerateOrder(NumericError):
    """The FRFT kernel is singular at this order (|sin alpha| too small)."""


class GridTooCoarse(NumericError):
    """Grid spacing violates the chirp sampling criterion."""


class GridInadequate(NumericError):
    """Grid extent or spacing cannot represent the requested state."""


class SingularConditioning(NumericError):
    """Conditioning variable has (numerically) zero variance."""


class NoSolution(NumericError):
    """No order satisfies the requested condition."""


class OutOfGrid(NumericError):
    """A requested coordinate lies outside the sampled axis."""


class NotAnFrft(NumericError):
    """Ray matrix is not a phase-space rotation."""

    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = residuals


class OrderOutOfRange(NumericError):
    """Order cannot be realised by the requested optical design."""


class DegenerateGeometry(NumericError):
    """Free-space geometry does not correspond to a proper FRFT."""


class FitDegenerate(NumericError):
    """Least-squares fit is ill-posed or did not converge."""
