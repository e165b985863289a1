import os

from dotenv import load_dotenv

load_dotenv()

# Threads
THREADS = int(os.getenv("HWD_THREADS", str(os.cpu_count() or 1)))

# Distance provider: full all-pairs matrix is cached up to this many vertices
APSP_CAP = int(os.getenv("HWD_APSP_CAP", "5000"))

# Randomness
DEFAULT_SEED = int(os.getenv("HWD_DEFAULT_SEED", "20240601"))

# Logging
LOG_LEVEL = os.getenv("HWD_LOG_LEVEL", "INFO").upper()

# Float comparisons use RELATIVE_TOLERANCE * max(1, diameter) as absolute slack
RELATIVE_TOLERANCE = float(os.getenv("HWD_TOLERANCE", "1e-9"))

# Reports
REPORT_SCHEMA_VERSION = "1"
