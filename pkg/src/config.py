# File: src/config.py

# Defaults shared by the library and the CLI. Flags override them per run.

SPEC_VERSION = "1.0"

DB_PATH = "history.db"

# Explicit conflict graphs above this size fall back to implicit mode.
DEFAULT_MEM_BUDGET = 3 * 1024 ** 3

RNG_ALGORITHM = "PCG64"

TABU_TENURE_BASE = 10
TABU_TENURE_SLOPE = 0.6
TABU_TENURE_JITTER = 10
DEFAULT_MAX_ITERATIONS = 100_000
DEFAULT_RESTARTS = 1
TABU_LOG_EVERY = 10_000
# Iterations (or DSATUR steps) between wall-clock checks under --time-limit.
DEADLINE_CHECK_EVERY = 64

PEEL_CANDIDATE_LIMIT = 64

# Rows per block in O(N^2) inner-product scans.
IP_BLOCK_ROWS = 2048
# Upper bound on entries of one inner-product block (rows x columns).
IP_BLOCK_CELLS = 1 << 26

EXACT_MAX_VERTICES = 64

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
