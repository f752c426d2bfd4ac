"""
Sabitler ve varsayılan değerler
"""

# Derece tipleri 1 = çıkış (out), 2 = giriş (in); dört yönlü assortativity katsayısı (a, b) sırası
TYPE_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))
DEFAULT_BOUND_ORDER = TYPE_PAIRS

# Olasılık tutarlılık toleransları
DIST_SUM_TOL = 1e-12
ETA_SUM_TOL = 1e-9
PROFILE_SLACK = 1e-9

# LP toleransları
FEASIBILITY_TOL = 1e-8
OPTIMALITY_TOL = 1e-9
PIVOT_TOL = 1e-11
BLAND_AFTER_DEGENERATE = 1000
ITERATION_FACTOR = 50
RESIDUAL_TOL = 1e-7
NONNEG_SLACK = 1e-9

# Gömülü simplex yoğun tablosunun üst sınırı (giriş sayısı); üstü HiGHS'e gider
SIMPLEX_DENSE_LIMIT = 4_000_000
LP_BACKENDS = ("auto", "simplex", "highs")

# Eta çözücü
TARGET_MATCH_TOL = 1e-4
MARGINAL_RESIDUAL_TOL = 1e-7
BOUND_CLAMP_TOL = 1e-6

# Yeniden bağlama
DEFAULT_CHECKPOINT_EVERY = 1000
DEFAULT_REWIRE_TOLERANCE = 0.05
RANDOM_BLOCK_SIZE = 8192

# DPA senaryo etiketleri
SCENARIO_LETTERS = {"alpha": "a", "beta": "b", "gamma": "g", "seed": "s"}
GAIN_BUCKETS = (
    "alpha-alpha", "alpha-beta", "alpha-gamma",
    "beta-beta", "beta-gamma", "gamma-gamma", "seed",
)

# EV uyumu
MIN_TAIL_DEGREES = 50
MIN_TAIL_POINTS = 10
EXPONENT_SEARCH_BOUNDS = (1.0001, 8.0)
ALPHA_GRID_POINTS = 11
DEFAULT_SIM_EDGES = 20000

# Deney hedefleri: r*(1,1), r*(1,2), r*(2,1), r*(2,2)
ER_EXPERIMENT_TARGETS = [0.6, 0.5, -0.4, -0.3]
DPA_EXPERIMENT_TARGETS = [0.1, 0.15, 0.1, 0.15]

# Tohum için ortam değişkeni
SEED_ENV_VAR = "DIDPR_SEED"
EFFECTIVE_CONFIG_NAME = "effective_config.json"

# Genel ayarlar
DEFAULT_SETTINGS = {
    "log_level": "INFO",
    "lp_backend": "auto",
    "jobs": 1,
    "output_dir": "data/runs",
}

# Alt komut şemaları: anahtarlar şemanın tamamıdır, değerler varsayılandır
COMMAND_DEFAULTS = {
    "generate": {
        "model": "er",
        "n": 1000,
        "p": 0.1,
        "alpha": None,
        "beta": None,
        "gamma": None,
        "delta_in": 1.0,
        "delta_out": 1.0,
        "edges": 10000,
        "fit": None,
        "replicates": 1,
        "output": "graph.txt",
        "degrees": False,
        "seed": None,
    },
    "assort": {
        "graph": None,
        "output": "profile.json",
    },
    "bounds": {
        "graphs": [],
        "order": ["11", "12", "21", "22"],
        "condition_pair": None,
        "condition_values": [],
        "output": "bounds.csv",
    },
    "solve-eta": {
        "graph": None,
        "targets": [],
        "interior": True,
        "output": "eta.csv",
    },
    "rewire": {
        "graphs": [],
        "targets": [],
        "eta": None,
        "max_steps": 200000,
        "checkpoint_every": DEFAULT_CHECKPOINT_EVERY,
        "tolerance": DEFAULT_REWIRE_TOLERANCE,
        "stop_early": False,
        "incremental": False,
        "interior": True,
        "replicates": 1,
        "seed": None,
    },
    "fit": {
        "graph": None,
        "n_tail": 200,
        "grid_points": ALPHA_GRID_POINTS,
        "sim_edges": DEFAULT_SIM_EDGES,
        "output": "ev_fit.json",
        "seed": None,
    },
    "scenario-gains": {
        "alpha": 0.3,
        "beta": 0.4,
        "gamma": 0.3,
        "delta_in": 1.0,
        "delta_out": 1.0,
        "edges": 20000,
        "targets": list(DPA_EXPERIMENT_TARGETS),
        "max_steps": 100000,
        "stop_early": True,
        "tolerance": DEFAULT_REWIRE_TOLERANCE,
        "replicates": 1,
        "output": "scenario_gains.csv",
        "seed": None,
    },
    "aggregate": {
        "traces": [],
        "output": "trace_mean.csv",
    },
    "degrees": {
        "graphs": [],
        "output": "degrees.csv",
    },
    "history": {
        "entry": None,
        "only": None,
        "clear": False,
    },
}
