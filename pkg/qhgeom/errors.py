"""Exception hierarchy for qhgeom"""

from typing import Optional


class QHGError(Exception):
    """Base class of every error raised by qhgeom"""


class DomainError(QHGError, ValueError):
    """Input outside the domain of a function (log of 0, degenerate moduli, ...)"""


class SingularInputError(DomainError):
    """Input hits a pole of an omega factor or a zero of a bracket"""


class MeshError(QHGError):
    """Malformed triangulation, gluing or normal path"""


class UndecoratedMeshError(MeshError):
    """A computation needs flattenings, charges or moduli that are missing"""


class NotIdealizableError(MeshError):
    """The idealization points of a tetrahedron are not pairwise distinct"""

    def __init__(self, message: str, tet: Optional[int] = None):
        super().__init__(message)
        self.tet = tet


class InfeasibleSystemError(QHGError):
    """An integer linear system has no solution"""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(QHGError):
    """An iterative solver did not reach its tolerance"""
