# utils/errors.py - Exception types raised by the numerical modules


class SchmidtNormError(ValueError):
    """Bad input to one of the library operations."""


class DimensionMismatchError(SchmidtNormError):
    pass


class RankOutOfRangeError(SchmidtNormError):
    pass


class ZeroVectorError(SchmidtNormError):
    pass


class NotHermitianError(SchmidtNormError):
    pass


class NotNormalError(SchmidtNormError):
    pass


class NotPositiveError(SchmidtNormError):
    pass


class NotProjectionError(SchmidtNormError):
    pass


class NotDensityOperatorError(SchmidtNormError):
    pass


class DistinctEigenvalueError(SchmidtNormError):
    pass


class SizeCapExceededError(SchmidtNormError):
    pass


class NumericalFailure(RuntimeError):
    """An eigensolver or SVD did not converge."""
