# Side letters used by the surface text format
SIDE_LETTERS = ("R", "T", "L", "B")

# Census cache format
CACHE_MAGIC = "# origami-census-cache"
CACHE_FORMAT_VERSION = 1
CACHE_COLUMNS = [
    "area", "code", "sigma", "genus", "epsilon",
    "hyperelliptic", "spin_parity", "classified",
    "horizontal", "vertical",
]

# Count series export
SERIES_COLUMNS = ["L", "count", "engine", "gamma1", "gamma2", "stratum", "component"]
ANY_TYPE = "*"

# Defaults, overridable through the environment (see core.config)
DEFAULT_JOBS = 1
DEFAULT_MAX_SURFACES = 2_000_000
DEFAULT_LOG_LEVEL = "WARNING"

# Fitting
MIN_FIT_POINTS = 5
FIT_WINDOW_RATIO = 10          # largest decade: L >= L_max / 10
MIN_ERROR_POINTS = 3

# Decimal places used when printing exact rationals
DECIMAL_PRECISION = 12

# Genus up to which every non-empty quadratic (epsilon = 0) stratum is connected
CONNECTED_QUADRATIC_MAX_GENUS = 1
