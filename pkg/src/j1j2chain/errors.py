"""Exception types raised across the package."""


class ChainError(Exception):
    """Base class for all package errors."""


class SingularAnisotropyError(ChainError, ValueError):
    """Raised when |sin(eta)| is too small for the R-matrix normalisation."""


class ResonantInhomogeneityError(ChainError, ValueError):
    """Raised when phi(2a) vanishes and the transfer-matrix Hamiltonian is undefined."""


class PoleError(ChainError, ZeroDivisionError):
    """Raised when an evaluation point sits on a pole of a kernel or eigenvalue."""


class RootCollisionError(ChainError, ValueError):
    """Raised when two Bethe roots coincide and the scattering factor is singular."""


class ConvergenceError(ChainError, RuntimeError):
    """Raised when an iterative numerical routine fails to converge."""


class DimensionError(ChainError, ValueError):
    """Raised when a matrix exceeds the dense-diagonalisation size limit."""
