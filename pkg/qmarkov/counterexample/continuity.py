import logging
from typing import Iterable, List, Union

import numpy as np
from pandas import DataFrame

from ..constants import EPSILON_LADDER
from .maps import QutritCounterexample
from .params import MapParams

logger = logging.getLogger(__name__)


def _ladder(params: MapParams, epsilon: Union[float, Iterable[float], None]) -> List[float]:
    if epsilon is None:
        ladder = list(EPSILON_LADDER)
    elif np.ndim(epsilon) == 0:
        ladder = [float(epsilon)]
    else:
        ladder = [float(e) for e in epsilon]
    starts = (0.0,) + params.times
    shortest = min(b - a for a, b in zip(starts, starts[1:]))
    for eps in ladder:
        if not 0 < eps < shortest / 2:
            raise ValueError(f"epsilon = {eps} outside (0, {shortest / 2})")
    return ladder


def continuity_report(
    params: MapParams = None, epsilon: Union[float, Iterable[float]] = None
) -> DataFrame:
    """Sup-norm gaps of the family across the junctions t1, t2, t3

    For every junction t and every epsilon the gap is the largest absolute
    entry of the matrix of Lambda_(t-eps) - Lambda_(t+eps).

    :param params: parameters, defaults to MapParams()
    :param epsilon: a single value or a decreasing ladder, defaults to
        EPSILON_LADDER
    :raises ValueError: if epsilon exceeds half of the shortest segment
    :return: DataFrame with columns junction, epsilon, gap, slope
    """
    params = MapParams() if params is None else params
    family = QutritCounterexample(params)
    rows = []
    for junction in params.times[:3]:
        for eps in _ladder(params, epsilon):
            gap = family.at(junction - eps).max_abs_diff(family.at(junction + eps))
            rows.append({"junction": junction, "epsilon": eps, "gap": gap, "slope": gap / eps})
    report = DataFrame(rows, columns=["junction", "epsilon", "gap", "slope"])
    logger.info("Continuity gaps\n%s", report)
    return report


def _time_derivative(family: QutritCounterexample, t: float, h: float) -> np.ndarray:
    return (family.at(t + h).matrix - family.at(t - h).matrix) / (2 * h)


def derivative_continuity_report(
    params: MapParams = None, epsilon: Union[float, Iterable[float]] = None
) -> DataFrame:
    """Gaps of the time derivative of Lambda_t across the junctions

    The derivative is estimated with central differences of step eps/4 at
    t - eps and t + eps, so that both stencils stay inside one segment.

    :param params: parameters, defaults to MapParams()
    :param epsilon: a single value or a decreasing ladder
    :return: DataFrame with columns junction, epsilon, left, right, gap
    """
    params = MapParams() if params is None else params
    family = QutritCounterexample(params)
    rows = []
    for junction in params.times[:3]:
        for eps in _ladder(params, epsilon):
            left = _time_derivative(family, junction - eps, eps / 4)
            right = _time_derivative(family, junction + eps, eps / 4)
            rows.append(
                {
                    "junction": junction,
                    "epsilon": eps,
                    "left": float(np.max(np.abs(left))),
                    "right": float(np.max(np.abs(right))),
                    "gap": float(np.max(np.abs(left - right))),
                }
            )
    report = DataFrame(rows, columns=["junction", "epsilon", "left", "right", "gap"])
    logger.info("Derivative gaps\n%s", report)
    return report
