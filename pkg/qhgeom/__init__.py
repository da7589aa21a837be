"""qhgeom - quantum hyperbolic state sums on branched triangulations"""

__version__ = "0.1.0"

from .errors import (ConvergenceError, DomainError, InfeasibleSystemError, MeshError, NotIdealizableError,
                     QHGError, SingularInputError, UndecoratedMeshError)
from .mesh import Mesh
from .tetra import FlatChargedTet
from .statesum import eq_mod_n, trace_tensor

__all__ = [
    "Mesh",
    "FlatChargedTet",
    "trace_tensor",
    "eq_mod_n",
    "QHGError",
    "DomainError",
    "SingularInputError",
    "MeshError",
    "UndecoratedMeshError",
    "NotIdealizableError",
    "InfeasibleSystemError",
    "ConvergenceError",
]
