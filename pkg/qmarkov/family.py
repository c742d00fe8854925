from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Iterable, List, Sequence

import numpy as np
from scipy.linalg import expm

from .operators import InvalidOperandError
from .superop import SuperOp


class DynamicalMapAbs(ABC):
    """Abstract class for one-parameter families of maps

    All family implementations should provide the system dimension dim, the
    largest time t_max at which the family is defined, and the method at(t)
    returning the map at time t in [0, t_max]. Whether the family really is
    a dynamical map (CPTP, continuous, identity at 0) is a property verified
    by checks, not assumed.
    """

    @abstractmethod
    def __init__(self) -> None:
        self.dim = 1
        self.t_max = 0.0

    @abstractmethod
    def at(self, t: float) -> SuperOp:
        """Return the map at time t

        :param t: time in [0, t_max]
        :raises ValueError: if t is out of range
        :return: the map
        """
        pass

    def _check_time(self, t: float) -> None:
        if t < 0 or t > self.t_max:
            raise ValueError(f"Time {t} outside [0, {self.t_max}]")

    def times(self, grid: Iterable[float]) -> List[float]:
        """Validate an ascending grid of times

        :param grid: times
        :raises ValueError: if the grid is not ascending or out of range
        :return: grid as list
        """
        grid = [float(t) for t in grid]
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("Grid should be ascending")
        for t in grid:
            self._check_time(t)
        return grid


class ConstantFamily(DynamicalMapAbs):
    """Family constant in time, Lambda_t = S

    :param S: the map, defaults to identity of given dimension
    :param t_max: the largest time
    :param dim: dimension used if S is not provided
    """

    def __init__(self, S: SuperOp = None, t_max: float = 1.0, dim: int = None) -> None:
        if S is None:
            if dim is None:
                raise ValueError("Either S or dim should be provided")
            S = SuperOp.identity(dim)
        self.S = S
        self.dim = S.dim
        self.t_max = t_max

    def at(self, t: float) -> SuperOp:
        self._check_time(t)
        return self.S


class SemigroupFamily(DynamicalMapAbs):
    """Semigroup Lambda_t = exp(t L) of a time-independent generator

    :param generator: the generator L
    :param t_max: the largest time
    """

    def __init__(self, generator: SuperOp, t_max: float = 1.0) -> None:
        self.generator = generator
        self.dim = generator.dim
        self.t_max = t_max

    def at(self, t: float) -> SuperOp:
        self._check_time(t)
        return SuperOp(expm(t * self.generator.matrix))


class ConjugatedFamily(DynamicalMapAbs):
    """Family in a rotated basis, X -> U Lambda_t(U^dagger X U) U^dagger

    The rotation acts on both sides, so the identity at time 0 is kept.

    :param family: the rotated family
    :param unitary: the unitary U
    """

    def __init__(self, family: DynamicalMapAbs, unitary: np.ndarray) -> None:
        unitary = np.asarray(unitary, dtype=complex)
        if unitary.shape != (family.dim, family.dim):
            raise InvalidOperandError(f"Unitary of shape {unitary.shape} does not match family")
        self.family = family
        self.unitary = unitary
        self.dim = family.dim
        self.t_max = family.t_max
        self._rotation = SuperOp.from_kraus([unitary])
        self._inverse = SuperOp.from_kraus([unitary.conj().T])

    def at(self, t: float) -> SuperOp:
        return self._rotation @ self.family.at(t) @ self._inverse


class PiecewiseFamily(DynamicalMapAbs):
    """Family constant on consecutive intervals

    Lambda_t = maps[i] for times[i] <= t < times[i+1], the last map is used
    up to and including t_max = times[-1].

    :param times: ascending breakpoints starting at 0, one more than maps
    :param maps: the maps on the intervals
    """

    def __init__(self, times: Sequence[float], maps: Sequence[SuperOp]) -> None:
        if len(times) != len(maps) + 1:
            raise ValueError("Number of breakpoints should exceed number of maps by one")
        if times[0] != 0 or any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("Breakpoints should be ascending and start at 0")
        self.breakpoints = list(times)
        self.maps = list(maps)
        self.dim = maps[0].dim
        self.t_max = times[-1]

    def at(self, t: float) -> SuperOp:
        self._check_time(t)
        index = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return self.maps[min(index, len(self.maps) - 1)]
