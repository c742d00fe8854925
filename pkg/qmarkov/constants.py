TOL_HERM = 1e-12
TOL_PSD = 1e-10
TOL_TP = 1e-10
TOL_DERIV = 1e-6
TOL_CLOSED = 1e-12

RANK_RTOL = 1e-8
SUPPORT_TOL = 1e-8
PURITY_TOL = 1e-8
SINGULAR_TOL = 1e-12

DEFAULT_H0 = 1e-4
DEFAULT_SEED = 20220325

DEFAULT_THETA = 1.5
DEFAULT_TIMES = (1.0, 2.0, 3.0, 4.0)
DEFAULT_DELTA = 1.0
EPSILON_LADDER = (1e-2, 1e-3, 1e-4)

SCHEMA_VERSION = "1.0"
