"""Maps of the qutrit construction

The family is piecewise on [0, t1), [t1, t2), [t2, t3) and [t3, t4]::

    Lambda_t = G1(tau)                 first segment
               G2(tau) E1              second segment
               G3(tau) E2 E1           third segment
               G4(tau) E3 E2 E1        last segment

with the local time tau in [0, 1] of each segment. G1 is the exponential
of the integrated dephasing generator, G2 and G3 are convex mixtures of the
identity with E2 and E3, and G4 rotates |2> in the |1>, |2> plane while
moving weight away from |3>.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict

import numpy as np
from scipy.linalg import expm

from ..family import DynamicalMapAbs
from ..operators import HermOp
from ..superop import KrausSet, SuperOp, compose
from .constants import CONSTANTS, DIM, ket
from .params import MapParams


def _check_index(i: int) -> None:
    if i not in (1, 2, 3, 4):
        raise ValueError(f"Map index {i} outside 1..4")


def _check_tau(tau: float) -> None:
    if tau < 0 or tau > 1:
        raise ValueError(f"tau = {tau} outside [0, 1]")


def _gamma4_kraus(tau: float, params: MapParams) -> KrausSet:
    angle = params.theta * tau**params.delta
    rotated = CONSTANTS.rotation(angle) @ ket(2)
    plus, minus = np.sqrt(1 + tau**2), np.sqrt(1 - tau**2)
    return KrausSet(
        [
            plus * np.outer(ket(1), ket(1)),
            plus * np.outer(rotated, ket(2)),
            minus * np.outer(ket(3), ket(1)),
            minus * np.outer(ket(3), ket(2)),
        ]
    )


def make_E(i: int, params: MapParams = None) -> SuperOp:
    """Return one of the four fixed maps

    E1 removes off-diagonal entries, E2 moves the population of |3> onto
    |2>, E3 prepares rhoA or rhoB depending on the population of |1> or |2>,
    and E4 is the end map of the last segment.

    :param i: index 1..4
    :param params: parameters, only theta and delta are used by E4
    :raises ValueError: if i is outside 1..4
    :return: the map
    """
    _check_index(i)
    if i == 1:
        identity = np.eye(DIM)
        return SuperOp.from_kraus([M / 2 for M in (identity,) + CONSTANTS.signs])
    elif i == 2:
        return SuperOp.from_kraus([CONSTANTS.K2])
    elif i == 3:
        kraus = [np.outer(ket(j), ket(k)) / np.sqrt(2) for k in (1, 2) for j in (k, 3)]
        return SuperOp.from_kraus(kraus)
    return gamma_family(4, 1.0, MapParams() if params is None else params)


def generator_L0() -> SuperOp:
    """Dephasing generator X -> D1 X D1 + D2 X D2 + D3 X D3 - 3X"""
    dephasing = SuperOp.from_kraus(list(CONSTANTS.signs))
    return dephasing - 3 * SuperOp.identity(DIM)


def generator(s: float, params: MapParams) -> SuperOp:
    """Time dependent generator L_s = gamma(s) L0, s in [0, 1)"""
    if s < 0 or s >= 1:
        raise ValueError(f"Generator time {s} outside [0, 1)")
    return params.gamma_rate(s) * generator_L0()


def gamma1_exponential(tau: float, params: MapParams) -> SuperOp:
    """First-segment map as dense exponential of g(tau) L0, tau in [0, 1)"""
    if tau < 0 or tau >= 1:
        raise ValueError(f"tau = {tau} outside [0, 1)")
    return SuperOp(expm(params.gamma_rate.integral(tau) * generator_L0().matrix))


def gamma_family(i: int, tau: float, params: MapParams) -> SuperOp:
    """Return the i-th segment map at local time tau

    The first map multiplies off-diagonal entries by exp(-4 g(tau)), with g
    the integrated rate, and tends to E1 at tau = 1. The last map applies
    tau^delta only inside the rotation angle.

    :param i: segment index 1..4
    :param tau: local time in [0, 1]
    :param params: the parameters
    :raises ValueError: if i or tau are out of range
    :return: the map
    """
    _check_index(i)
    _check_tau(tau)
    if i == 1:
        decay = float(np.exp(-4 * params.gamma_rate.integral(tau)))
        coefficients = np.full((DIM, DIM), decay)
        np.fill_diagonal(coefficients, 1.0)
        return SuperOp(np.diag(coefficients.T.reshape(-1)).astype(complex))
    elif i in (2, 3):
        exponent = params.f1 if i == 2 else params.f2
        weight = exponent.decay(tau)
        return weight * SuperOp.identity(DIM) + (1 - weight) * make_E(i, params)
    return SuperOp.from_kraus(_gamma4_kraus(tau, params))


class QutritCounterexample(DynamicalMapAbs):
    """Piecewise qutrit family on [0, t4]

    Fixed maps and their compositions are cached on construction.

    :param params: parameters, defaults to MapParams()
    """

    def __init__(self, params: MapParams = None) -> None:
        self.params = MapParams() if params is None else params
        self.dim = DIM
        self.t_max = self.params.t4
        E1, E2, E3 = (make_E(i, self.params) for i in (1, 2, 3))
        self.E = {1: E1, 2: E2, 3: E3, 4: make_E(4, self.params)}  # type: Dict[int, SuperOp]
        self.prefix = {
            1: SuperOp.identity(DIM),
            2: E1,
            3: compose(E2, E1),
            4: compose(E3, compose(E2, E1)),
        }  # type: Dict[int, SuperOp]

    def gamma(self, i: int, tau: float) -> SuperOp:
        return gamma_family(i, tau, self.params)

    def at(self, t: float) -> SuperOp:
        index, tau = self.params.segment(t)
        if index == 1:
            return self.gamma(1, tau)
        return compose(self.gamma(index, tau), self.prefix[index])

    def image_states(self):
        """The pair rhoA, rhoB spanning the image of Lambda_t3"""
        return CONSTANTS.rhoA, CONSTANTS.rhoB


@lru_cache(maxsize=16)
def _cached_family(params: MapParams) -> QutritCounterexample:
    return QutritCounterexample(params)


def lambda_t(t: float, params: MapParams = None) -> SuperOp:
    """Map of the qutrit family at time t in [0, t4]

    :param t: time
    :param params: parameters, defaults to MapParams()
    :raises ValueError: if t is outside [0, t4]
    :return: the map
    """
    return _cached_family(MapParams() if params is None else params).at(t)


def segment_norm_closed_form(t: float, X: HermOp, params: MapParams) -> float:
    """Trace norm of Lambda_t(X) on the two middle segments

    Only the diagonal of X enters. On [t1, t2) with w = exp(-f1(tau))::

        |x11| + |x22 + (1 - w) x33| + w |x33|

    and on [t2, t3) with w = exp(-f2(tau)) and c = (1 + w)/2::

        c |x11| + c |x22 + x33| + (1 - w)/2 |x11 + x22 + x33|

    :param t: time in [t1, t3)
    :param X: operator
    :param params: parameters
    :raises ValueError: if t is not in [t1, t3)
    :return: the trace norm
    """
    index, tau = params.segment(t)
    x11, x22, x33 = np.real(np.diag(X))
    if index == 2:
        w = params.f1.decay(tau)
        return float(abs(x11) + abs(x22 + (1 - w) * x33) + w * abs(x33))
    elif index == 3:
        w = params.f2.decay(tau)
        c = (1 + w) / 2
        return float(c * abs(x11) + c * abs(x22 + x33) + (1 - w) / 2 * abs(x11 + x22 + x33))
    raise ValueError(f"Time {t} outside [{params.t1}, {params.t3})")
