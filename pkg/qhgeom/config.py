"""Configuration module for qhgeom"""

from pathlib import Path

# Base directories
PACKAGE_DIR = Path(__file__).resolve().parent
DATA_DIR = PACKAGE_DIR / "data"
FIG8_MESH_FILE = DATA_DIR / "fig8.json"
DOUBLED_TET_FILE = DATA_DIR / "doubled_tet.json"
PUNCTURED_TORUS_FILE = DATA_DIR / "punctured_torus.json"

# Tolerances
VALIDATION_TOL = 1e-9  # edge totals, per-tet sums, quantum products
EQ_MOD_N_TOL = 1e-8  # comparison up to sign and N-th roots of unity
PRECONDITION_TOL = 1e-8  # u'^N + v'^N = 1 check for matrix dilogarithms
DEGENERACY_GUARD = 1e-4  # resample transits with moduli this close to 0 or 1
POLE_GUARD = 1e-3  # resample when some |1 - u' zeta^j| drops below this
INTEGRALITY_TOL = 1e-6  # right-hand sides of the integer systems

# Rogers dilogarithm quadrature
QUAD_EPSABS = 1e-11
QUAD_EPSREL = 1e-11
QUAD_LIMIT = 200
ROGERS_CUT_GUARD = 1e-9  # detour when the segment passes this close to 0 or 1

# Dehn filling solver
NEWTON_MAX_ITER = 60
NEWTON_TOL = 1e-12
NEWTON_STEP = 1e-7  # finite difference step for the derivative
NEWTON_DAMPING = 0.5  # backtracking factor of the step length
CONTINUATION_STEPS = 20

# Lattice reduction
REDUCTION_MAX_ROUNDS = 64

# Batches
DEFAULT_SEED = 7
DEFAULT_SAMPLES = 50
MAX_RESAMPLE = 1000

# Environment
THREADS_ENV = "QHGEOM_THREADS"

# CLI settings
CLI_NAME = "qhgeom"
