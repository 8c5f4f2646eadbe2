"""Constants used throughout the application, including those derived from environment variables."""

import os
from pathlib import Path

# Exhaustive enumeration guard (oracle, certificate search)
ENUM_EDGE_BOUND = int(os.getenv("POPROOM_ENUM_BOUND", "24"))

# Instance generation configuration
EDGE_PROBABILITY = float(os.getenv("POPROOM_EDGE_PROB", "0.8"))
REJECTION_CAP = int(os.getenv("POPROOM_REJECTION_CAP", "1000000"))

# Experiment configuration
DEFAULT_SAMPLES = int(os.getenv("POPROOM_SAMPLES", "200000"))
CHUNK_SIZE = 2000  # stream indices per joblib task; independent of worker count
CSV_HEADER = "n,c,p,samples,seed,no_stable,popular_no_stable,elapsed_ms"

# The nine (n, c) cells of the published study
STUDY_CELLS = [(n, c) for c in (3, 4, 5) for n in (7, 9, 11)]

# Published tallies over 10^6 accepted instances: (no stable, popular but no stable)
PUBLISHED_SAMPLES = 1_000_000
PUBLISHED_TABLE = {
    (7, 3): (384678, 146),
    (9, 3): (508843, 32),
    (11, 3): (598525, 10),
    (7, 4): (298860, 1415),
    (9, 4): (448599, 216),
    (11, 4): (553813, 38),
    (7, 5): (211911, 8195),
    (9, 5): (384468, 914),
    (11, 5): (506958, 138),
}

# Experiment result caching configuration
CACHE_DIR = Path(os.getenv("POPROOM_CACHE_DIR", "cache/experiments"))
DISABLE_CACHE = os.getenv("POPROOM_DISABLE_CACHE", "false").lower() == "true"

# Slow statistical tests
RUN_SLOW = os.getenv("POPROOM_RUN_SLOW", "0") == "1"
