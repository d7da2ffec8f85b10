# config.py - Numerical defaults, tolerances and service settings
import os
from dotenv import load_dotenv

# Tolerances. Every threshold the library uses lives here so the CLI, the
# HTTP service and the tests agree on them.
HERMITIAN_RTOL = 1e-10       # max |X - X*| relative to max |X|
UNIT_NORM_TOL = 1e-8         # | ||v|| - 1 | for pure states
ZERO_EIG_RTOL = 1e-9         # |lambda| <= ZERO_EIG_RTOL * max|lambda| counts as zero
DENSITY_TOL = 1e-8           # positivity and trace checks for density operators
SCHMIDT_RANK_TOL = 1e-10     # alpha_i > SCHMIDT_RANK_TOL * alpha_1 counts toward SR
PROJECTION_TOL = 1e-8        # idempotence / Hermiticity of projections
POSITIVE_TOL = 1e-8          # lambda_min >= -POSITIVE_TOL * scale for PSD inputs
STRICT_MARGIN = 1e-8         # margin (times scale) enforced on strict inequalities
WITNESS_TOL = 1e-8           # <v|X|v> < -WITNESS_TOL for a negative witness
EIGEN_CLUSTER_RTOL = 1e-8    # relative gap separating distinct eigenvalues
BOUND_SLACK = 1e-9           # lower <= upper + BOUND_SLACK in NormBounds

# Heuristic maximizer and brute-force oracle
HEURISTIC_RESTARTS = 32
HEURISTIC_MAX_ITERS = 500
HEURISTIC_GAIN_RTOL = 1e-12
BRUTEFORCE_SAMPLES = 10000
BRUTEFORCE_BATCH = 4096
DEFAULT_SEED = 0

# Werner family
SIZE_CAP = 4096              # largest materialized matrix side
RATIONAL_LIMIT_BITS = 128    # exact Fraction evaluation while n^(2r) < 2**128
WERNER_FLAG_MIN_N = 4        # the "exceeds 1/2" flag is only meaningful for n >= 4

# Text output
TEXT_SIG_DIGITS = 6


class ServiceSettings:
    """Deployment settings for the HTTP service, read from the environment.

    The CLI never touches these.
    """

    def __init__(self):
        load_dotenv()
        # Vercel sets these automatically
        self.is_production = os.getenv("VERCEL") is not None or os.getenv("VERCEL_ENV") is not None
        self.log_level = os.getenv("LOG_LEVEL", "WARNING" if self.is_production else "INFO").upper()
        self.size_cap = int(os.getenv("SERVICE_SIZE_CAP", "256"))
        self.max_restarts = int(os.getenv("SERVICE_MAX_RESTARTS", str(HEURISTIC_RESTARTS)))
        if self.size_cap < 1:
            raise ValueError("SERVICE_SIZE_CAP must be a positive integer")
        if self.max_restarts < 1:
            raise ValueError("SERVICE_MAX_RESTARTS must be a positive integer")


_settings = None


def get_settings() -> ServiceSettings:
    global _settings
    if _settings is None:
        _settings = ServiceSettings()
    return _settings
