# File: shared/constants.py

# precision
DEFAULT_DIGITS = 60
MIN_DIGITS = 30
GUARD_DIGITS = 15
PRECISION_CAP_DIGITS = 2000

# desk-scale caps
N_MAX_CAP = 64
FREDHOLM_M_CAP = 600
MAX_SERIES_TERMS = 20000

# adaptive ODE integration (scipy)
ODE_METHOD = "DOP853"
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14

# spectral differentiation of grid quantities
CHEB_NODES = 64

# run layer
DEFAULT_TOL = 1e-8
DEFAULT_WORKERS = 4
DEFAULT_OUTPUT = "json"
SETTINGS_FILE = "settings.json"
ENV_DIGITS = "PJL_DIGITS"
ENV_TOL = "PJL_TOL"
ENV_WORKERS = "PJL_WORKERS"
ENV_DB = "PJL_DB"
