import os

SCHEMA_VERSION = "1.0"

# --- Sphere geometry ---
MAX_K = 3
SPHERE_TOL = 1e-12
TANGENT_TOL = 1e-10
UNIT_DIRECTION_TOL = 1e-8
FRAME_SKIP_TOL = 1e-6

# --- Covariant differentiation ---
FD_STEP = 1e-5
FD_RICHARDSON_TOL = 1e-4
MILNOR_FD_STEP = 1e-5
JACOBIAN_CHECK_SAMPLES = 64
JACOBIAN_FD_TOL = 1e-6

# --- Custom domain cross-checks ---
CHART_FD_STEP = 1e-5
CHART_CHECK_TOL = 1e-8
DOMAIN_CHECK_SAMPLES = 256

# --- Quadrature ---
DEFAULT_NODES = (64, 64, 48)
DEFAULT_MC_SAMPLES = 1_000_000
DEFAULT_SEED = 20240917
CHUNK_SIZE = int(os.getenv("UNIT_FIELD_LAB_CHUNK_SIZE", "65536"))
N_JOBS = int(os.getenv("UNIT_FIELD_LAB_N_JOBS", "1"))

# --- Theorem suite ---
DEFAULT_T_VALUES = (0.1, 0.25, 0.5)
HYPOTHESIS_TOL = 1e-7
CONCLUSION_SLACK = 1e-7
BOUNDARY_COINCIDENCE_TOL = 1e-9
DICHOTOMY_TOL = 1e-9
MC_SIGMA_MULTIPLIER = 3.0
IDENTITY_TOL = 1e-12
IDENTITY_SAMPLES = 1000

CSV_FLOAT_FORMAT = "%.15g"
