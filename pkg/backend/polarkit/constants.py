# Signal-set presets
PRESET_PSK_PREFIX = "psk:"
PRESET_QUAD_EQ = "quad-eq"
PRESET_PAM3_EQ = "pam3-eq"
PRESETS = [PRESET_QUAD_EQ, PRESET_PAM3_EQ]

# Channel roles
ROLE_GOOD = "good"
ROLE_BAD = "bad"
ROLE_FER = "fer"

# Numeric tolerances
DISTANCE_RTOL = 1e-9
ENERGY_RTOL = 1e-12
NORMALIZATION_ATOL = 1e-9

# Search certificates
CERT_EQUIDISTANT = "equidistant"
CERT_ALMOST_EQUIDISTANT = "almost-equidistant"
CERT_BEST_FOUND = "best-found"

# CSV schemas
SPECTRUM_COLUMNS = ["d_over_sqrtEs", "count"]
BOUND_COLUMNS = ["snr_db", "pe_bound"]
SIM_COLUMNS = ["snr_db", "trials", "errors", "rate", "ci_lo", "ci_hi", "bound"]
RELIABILITY_COLUMNS = ["index", "error_rate", "stderr"]

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3

# API endpoints
API_PREFIX = "/api"
SIGNALSETS_PREFIX = f"{API_PREFIX}/signalsets"
KERNELS_PREFIX = f"{API_PREFIX}/kernels"
ANALYSIS_PREFIX = API_PREFIX

# HTTP codes by their RFC 9110 names; starlette's aliases changed across releases
HTTP_CONTENT_TOO_LARGE = 413
HTTP_UNPROCESSABLE_CONTENT = 422
