DEFAULT_SEED = 20170406

# oracle enumeration budgets
DEFAULT_MAX_PATH_LENGTH = 40
DEFAULT_MAX_PATHS = 2000
DEFAULT_MAX_EXPANSIONS = 200000

# kappa searches vertex subsets
KAPPA_MAX_VERTICES = 12

# fuzzing caps for reduction equivalence runs
ALT_MAX_VERTICES = 8
NEAR_DYCK_MAX_VERTICES = 6
DYCK2_MAX_VERTICES = 5
FUZZ_SCRIPT_LENGTH = 30
FUZZ_RUNS = 200
FUZZ_EDGE_DENSITY = 0.3
FUZZ_QUERY_RATE = 0.3

# per-kind (min, max) number of target updates produced by one source update
TRANSLATION_BOUNDS = {
    "alt_to_neardyck": (1, 2),
    "neardyck_to_dyck2": (1, 1),
    "dyck2_to_undirected": (12, 12),
}

# number of interior vertices on every edge gadget of the undirected encoding
GADGET_INTERIOR = 11

# word-level suites
Q_VALIDATE_LENGTH = 10
LEMMA5_WORD_LENGTH = 10
LEMMA7_SAMPLE = 25
PROP1_RANDOM_SAMPLES = 1000
PROP1_MAX_VERTICES = 6

REPORT_KEY_WIDTH = 12

# lemma suites: nominal and Dyck path enumeration inside compiled gadgets
LEMMA_SUITE_BUDGET = 40
LEMMA_SUITE_PATHS = 400
LEMMA_SUITE_EXPANSIONS = 20000
LEMMA_SOURCE_SAMPLE = 6
LEMMA_VARPI_LENGTH = 6
LEMMA3_PATH_LENGTH = 3
