from .constants import CONSTANTS, ket
from .maps import QutritCounterexample, gamma_family, lambda_t, make_E
from .params import MapParams, RateFunction, load_params

__all__ = [
    "CONSTANTS",
    "ket",
    "MapParams",
    "RateFunction",
    "load_params",
    "QutritCounterexample",
    "gamma_family",
    "lambda_t",
    "make_E",
]
