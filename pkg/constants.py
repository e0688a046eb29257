"""Common constant definitions for the filter bank modules and CLI."""

# File format headers
GRAPH_HEADER = "graphfb-graph v1"
SIGNAL_HEADER = "graphfb-signal v1"
COEFFS_HEADER = "graphfb-coeffs v1"
EIG_CACHE_HEADER = "graphfb-eig v1"

# Spectral tolerances
TIE_RTOL = 1e-8
SIGN_THRESHOLD = 1e-12
SYMMETRY_RTOL = 1e-10
ORTHOGONALITY_TOL = 1e-10

# Filter design
PR_TOL = 1e-10
PROFILE_TIE_TOL = 1e-10
DESIGN_IDEAL = "ideal"
DESIGN_LOCAL = "local"
DESIGN_BIOR = "bior"
DESIGNS = (DESIGN_IDEAL, DESIGN_LOCAL, DESIGN_BIOR)
KIND_ORTHOGONAL = "orthogonal"
KIND_BIORTHOGONAL = "biorthogonal"
STRATEGY_IDEAL = "ideal"
STRATEGY_ALPHA = "alpha"
STRATEGY_BETA = "beta"
STRATEGY_TRIVIAL = "trivial"
SPLIT_SQRT = "sqrt"
SPLIT_UNEVEN = "uneven"
SPLITS = (SPLIT_SQRT, SPLIT_UNEVEN)

# Random biorthogonal profiles stay away from the (0, 2) boundary
BIOR_F_LOW = 0.1
BIOR_F_HIGH = 1.9

# Remez exchange
REMEZ_GRID_MIN = 2000
REMEZ_POINTS_PER_COEFF = 50
REMEZ_MAX_ITER = 200
REMEZ_RTOL = 1e-8
TARGET_SPECTRUM = "spectrum"
TARGET_INTERPOLANT = "interpolant"
REMEZ_TARGETS = (TARGET_INTERPOLANT, TARGET_SPECTRUM)
REMEZ_DEFAULT_TARGET = TARGET_INTERPOLANT

# Locality experiments
IMPULSE_TAU_RATIO = 1e-3
STEP_AMPLITUDE = 0.2

# Generators
GENERATORS = ("ring", "sensor", "community")
SENSOR_DEFAULT_RADIUS = 0.15
COMMUNITY_DEFAULT_BLOCKS = 8
COMMUNITY_DEFAULT_P_IN = 0.2
COMMUNITY_DEFAULT_P_OUT = 0.002

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
