"""Exception hierarchy shared by every qmatrix module."""


class QMatrixError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QMatrixError, ValueError):
    pass


class NotHermitian(QMatrixError, ValueError):
    pass


class NotPSD(QMatrixError, ValueError):
    pass


class NoConvergence(QMatrixError, ArithmeticError):
    pass


class ExpmOverflow(QMatrixError, OverflowError):
    """Raised when a matrix exponential would need more squarings than allowed."""


class InvalidCutoff(QMatrixError, ValueError):
    pass


class InvalidScale(QMatrixError, ValueError):
    pass


class InvalidJ(QMatrixError, ValueError):
    pass


class BadModeIndex(QMatrixError, IndexError):
    pass


class SectorEmpty(QMatrixError, ValueError):
    pass


class Unclassifiable(QMatrixError, ValueError):
    pass


class EmptyInput(QMatrixError, ValueError):
    pass


class BoundaryReached(QMatrixError, RuntimeError):
    """Probability mass leaked onto the edge of a finite lattice."""


class NonFiniteState(QMatrixError, FloatingPointError):
    pass


class ConfigError(QMatrixError, ValueError):
    pass
