"""Exception types raised across the package."""


class ColldephError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitianError(ColldephError):
    """A matrix expected to be Hermitian failed the symmetry check."""


class DimensionMismatchError(ColldephError):
    """Operands have incompatible shapes or qubit counts."""


class MaskMismatchError(ColldephError):
    """A bipartition mask does not match the state's qubit count."""


class NotUnitVectorError(ColldephError):
    """A field orientation vector is not normalized."""


class NotUnitaryError(ColldephError):
    """A matrix expected to be unitary is not."""


class GridRangeError(ColldephError):
    """Requested time lies outside a tabulated characteristic-function grid."""


class InvalidSpectrumError(ColldephError):
    """A fluctuation spectrum produced an invalid (non-PSD) Toeplitz matrix."""


class ParamRangeError(ColldephError):
    """A state-family parameter lies outside its admissible range."""


class UnsupportedStateError(ColldephError):
    """A state constructor was asked for an unsupported configuration."""


class SolverFailedError(ColldephError):
    """The SDP solver did not return a certified optimum."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class ConfigError(ColldephError):
    """Invalid CLI or JSON configuration."""
