"""Exception hierarchy shared by all modules."""


class QuantumModelError(ValueError):
    """Base class for every validation failure raised by this package."""


class DimensionMismatch(QuantumModelError):
    pass


class NonHermitianInput(QuantumModelError):
    pass


class NotPositiveSemidefinite(QuantumModelError):
    pass


class NotNormalized(QuantumModelError):
    pass


class InvalidWeights(QuantumModelError):
    pass


class OutOfRange(QuantumModelError):
    pass


class IncompleteChannel(QuantumModelError):
    """Kraus operators fail the completeness relation sum(A^dag A) = I."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConfigInvalid(QuantumModelError):
    pass


class MacroscopicityWarning(UserWarning):
    """The requested error bound implies a microscopic apparatus."""
