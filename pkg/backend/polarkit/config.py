import os
from pathlib import Path

from dotenv import load_dotenv

from .env import get_bool_env, get_env_var, get_float_env, get_int_env

# Base directories
BASE_DIR = Path(__file__).parent.parent.parent

# Load environment variables from project .env
load_dotenv(BASE_DIR / ".env")

# App settings
APP_NAME = "polarkit"
DEBUG = get_bool_env("POLARKIT_DEBUG", False)
LOG_LEVEL = "DEBUG" if DEBUG else (get_env_var("POLARKIT_LOG_LEVEL", "INFO") or "INFO").upper()
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# Reproducibility
SEED_ENV_VAR = "POLARKIT_SEED"
DEFAULT_SEED = get_int_env(SEED_ENV_VAR, 1)

# Monte Carlo
DEFAULT_THREADS = max(1, get_int_env("POLARKIT_THREADS", os.cpu_count() or 1))
BLOCK_TRIALS = max(1, get_int_env("POLARKIT_BLOCK_TRIALS", 4096))
EARLY_STOP_ERRORS = get_int_env("POLARKIT_EARLY_STOP_ERRORS", 200)
CONSTRUCTION_TRIALS = max(1, get_int_env("POLARKIT_CONSTRUCTION_TRIALS", 20000))
OUTPUT_DIR = Path(get_env_var("POLARKIT_OUTPUT_DIR", str(BASE_DIR / "data" / "campaigns")))

# Spectrum analysis / search
PROBE_SNR_DB = get_float_env("POLARKIT_PROBE_SNR_DB", 10.0)
SEARCH_MAX_Q = get_int_env("POLARKIT_SEARCH_MAX_Q", 10)

# HTTP server
HOST = get_env_var("POLARKIT_HOST", "127.0.0.1")
PORT = get_int_env("POLARKIT_PORT", 8080)
