DEFAULT_ENV_PREFIX = "GROWTH_LAB_"

# Expression layer
EXP_ABSORPTION_GAP = 128
EXPONENT_LIMIT = 2**62

# Growth functionals
DEFAULT_ANGULAR_SAMPLES = 64
MIN_ANGULAR_SAMPLES = 64
GOLDEN_SECTION_TOL = 1e-10
PROXIMITY_INITIAL_PANELS = 64
PROXIMITY_MAX_DEPTH = 20
PROXIMITY_REL_TOL = 1e-8
CONTOUR_START_SEGMENTS = 256
CONTOUR_UNIFORM_CAP = 2**12
CONTOUR_SEGMENT_CAP = 2**20
INTEGRALITY_TOL = 1e-6
RADIUS_PERTURBATION = 1e-9
COUNTING_MIN_GRID = 32
COUNTING_JUMP_REL_TOL = 1e-8
COUNTING_INNER_SHIFT = 1e-6

# Estimators
ENVELOPE_BAND = 0.05
ORDER_THRESHOLD = 50.0
MIN_ENVELOPE_POINTS = 3
MIN_ESTIMATION_GRID = 8
POLYNOMIAL_GROWTH_TOL = 0.05
SUPERLINEAR_RATIO = 1.5
LOWER_BOUND_SHARE = 0.30

# Indicator
ZERO_RAY_BAND = 1e-12

# ODE layer
ORDER_TOLERANCE = 0.1
RESIDUAL_TOLERANCE = 1e-9
RESIDUAL_ANGULAR_SAMPLES = 64
MIN_RESIDUAL_SAMPLES = 32
NONZERO_PROBES = 20
PROBE_SEED = 20240601
KWON_MIN_SAMPLES = 256
KWON_EQUALITY_TOL = 1e-12
WANG_LAINE_ANGLES = 33
WANG_LAINE_FLOOR = 5.0  # in units of pi
CALIBRATION_RADII = 3

# Grids
DEFAULT_ORDER_RMIN = 10.0
DEFAULT_ORDER_RMAX = 1e6
DEFAULT_ORDER_POINTS = 24
DEFAULT_ZERO_RMIN = 10.0
DEFAULT_ZERO_RMAX = 1e5
DEFAULT_ZERO_POINTS = 13
DEFAULT_RESIDUAL_RADII = (1.0, 2.0, 5.0, 10.0)
DEFAULT_LEMMA_RMIN = 1.0
DEFAULT_LEMMA_RMAX = 1e4
DEFAULT_LEMMA_POINTS = 200

ERROR_PARSE = "E101: Syntax error at byte {offset}: {details}"
ERROR_NON_INTEGER_EXPONENT = "E102: Exponent after '^' must be an integer literal (byte {offset})."
ERROR_DIVISION_BY_ZERO = "E103: Division by zero while evaluating at z={point}."
ERROR_RANGE_OVERFLOW = "E104: Value out of extended range ({details})."
ERROR_ZERO_LOG = "E105: log of zero is undefined."

ERROR_BAD_RADIUS = "E201: Radius must be positive, got {radius}."
ERROR_FEW_SAMPLES = "E202: At least {minimum} angular samples are required, got {count}."
ERROR_CIRCLE_EVALUATION = "E203: Evaluation failed on |z|={radius} at theta={theta}: {details}"
ERROR_QUADRATURE = "E204: Quadrature did not converge; worst subinterval [{lo}, {hi}]."
ERROR_CONTOUR_TOO_CLOSE = "E205: Contour |z|={radius} passes too close to a zero (raw integral {raw})."
ERROR_POLE_INSIDE = "E206: Pole detected inside |z|<={radius}; meromorphic characteristic is not supported."
ERROR_FEW_ENVELOPE = "E207: Only {count} envelope points available; at least 3 are required."
ERROR_BAD_GRID = "E208: Radius grid invalid: {details}"
ERROR_COUNTING_ORIGIN = "E209: Counting function requires 0 < r0 < r (r0={r0}, r={radius})."

ERROR_ZERO_RAY = "E301: theta={theta} lies on a zero ray of delta(P, theta)."
ERROR_BAD_POLY = "E302: Polynomial needs degree >= 1 and a nonzero leading coefficient."
ERROR_FACTORIZATION_ORDER = "E303: Factorization requires order(v) < deg P (got {order} >= {degree})."
ERROR_BAD_INTERVAL = "E304: Interval [{lo}, {hi}] must satisfy 0 < lo <= hi."

ERROR_B_ZERO = "E401: Coefficient B vanishes at all probe points."
ERROR_BAD_PAIR = "E402: Pair (k, j)=({k}, {j}) must satisfy k > j >= 0 and k <= 2."
ERROR_NO_CANDIDATE = "E403: Instance '{label}' has no candidate solution."
ERROR_RESIDUAL_PRECONDITION = "E404: Candidate residual {value} exceeds {tolerance} at r={radius}."
ERROR_INFINITE_CANDIDATE = "E405: Candidate solution of '{label}' has no finite order estimate."
ERROR_LEMMA_CONFIG = "E406: Invalid lemma configuration: {details}"

ERROR_INSTANCE_SCHEMA = "E501: Instance JSON invalid: {details}"
ERROR_INSTANCE_READ = "E502: Could not read instance file {path}: {details}"
ERROR_REPORT_WRITE = "E503: Could not write report {path}: {details}"
ERROR_USAGE = "E504: {details}"
