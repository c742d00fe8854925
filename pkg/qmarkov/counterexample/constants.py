from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.linalg import expm

DIM = 3


def ket(i: int) -> np.ndarray:
    """Basis ket |i> of the qutrit, i in 1..3"""
    if i not in (1, 2, 3):
        raise ValueError(f"Basis index {i} outside 1..3")
    vector = np.zeros(DIM, dtype=complex)
    vector[i - 1] = 1
    return vector


def projector(vector: np.ndarray) -> np.ndarray:
    """Return |v><v|"""
    return np.outer(vector, np.conj(vector))


def _readonly(matrix) -> np.ndarray:
    matrix = np.array(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True, eq=False)
class ConstantsTable:
    """Constant matrices of the qutrit construction

    D1, D2, D3 are diagonal sign matrices, K2 moves |3> onto |2>, G generates
    rotations of the |1>, |2> plane, and rhoA, rhoB are the two mixed states
    spanning the image of the third segment's end map.
    """

    D1: np.ndarray = field(default_factory=lambda: _readonly(np.diag([-1, 1, 1])))
    D2: np.ndarray = field(default_factory=lambda: _readonly(np.diag([1, -1, 1])))
    D3: np.ndarray = field(default_factory=lambda: _readonly(np.diag([1, 1, -1])))
    K2: np.ndarray = field(default_factory=lambda: _readonly([[1, 0, 0], [0, 1, 1], [0, 0, 0]]))
    rhoA: np.ndarray = field(default_factory=lambda: _readonly(np.diag([1, 0, 1]) / 2))
    rhoB: np.ndarray = field(default_factory=lambda: _readonly(np.diag([0, 1, 1]) / 2))
    G: np.ndarray = field(default_factory=lambda: _readonly([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]))

    @property
    def signs(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.D1, self.D2, self.D3)

    def rotation(self, angle: float) -> np.ndarray:
        """Unitary exp(i G angle)"""
        return expm(1j * angle * self.G)

    def theta_ket(self, theta: float) -> np.ndarray:
        """|theta> = exp(i G theta)|2> = sin(theta)|1> + cos(theta)|2>"""
        return self.rotation(theta) @ ket(2)


CONSTANTS = ConstantsTable()
