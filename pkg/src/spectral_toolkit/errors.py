"""Exception hierarchy shared by all modules."""


class SpectralToolkitError(Exception):
    """Base class for toolkit errors."""


class DimensionMismatch(SpectralToolkitError, ValueError):
    pass


class NotHermitian(SpectralToolkitError, ValueError):
    pass


class NotInvertible(SpectralToolkitError, ValueError):
    """Raised for (numerically) singular input.

    The smallest singular value is kept on ``smallest_singular_value``.
    """

    def __init__(self, smallest_singular_value, message=None):
        self.smallest_singular_value = float(smallest_singular_value)
        if message is None:
            message = f"matrix is singular (smallest singular value {self.smallest_singular_value:.3e})"
        super().__init__(message)


class NotInAlgebra(SpectralToolkitError, ValueError):
    def __init__(self, residual, message=None):
        self.residual = float(residual)
        if message is None:
            message = f"element is not in the algebra (projection residual {self.residual:.3e})"
        super().__init__(message)


class OutsideNeighborhood(SpectralToolkitError, ValueError):
    pass


class InsufficientSamples(SpectralToolkitError, ValueError):
    pass


class NotAnOmegaForm(SpectralToolkitError, ValueError):
    def __init__(self, failing, message):
        self.failing = failing
        super().__init__(message)


class BadBlockLayout(SpectralToolkitError, ValueError):
    pass


class BadWeights(SpectralToolkitError, ValueError):
    pass


class NotSorted(SpectralToolkitError, ValueError):
    pass


class LengthMismatch(SpectralToolkitError, ValueError):
    pass


class ParseError(SpectralToolkitError, ValueError):
    pass


class ValidationError(SpectralToolkitError, ValueError):
    pass


class UnknownCommand(SpectralToolkitError, ValueError):
    pass
