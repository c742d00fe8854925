"""Superoperator algebra

Linear maps on d x d operators are stored as d^2 x d^2 matrices acting on
column-stacked vectors, so that vec(|i><j|) has a single unit entry at index
j*d + i. With this convention

.. math::

    vec(A X B) = (B^T \\otimes A) vec(X),

hence X -> K X K^dagger is represented by conj(K) (x) K. The Choi matrix is
the unnormalized C = sum_ij S(|i><j|) (x) |i><j| (output factor first), so a
map is trace preserving iff tracing out the first factor of C gives identity.
"""
from __future__ import annotations

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from multimethod import multimethod
from pandas import DataFrame

from .constants import RANK_RTOL, TOL_PSD, TOL_TP
from .operators import KEEP_SECOND, InvalidOperandError, ProbeSet, partial_trace
from .utils.utils import random_pure_states


def vec(X: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization of a square matrix"""
    return np.asarray(X).T.reshape(-1)


def unvec(v: np.ndarray, dim: int = None) -> np.ndarray:
    """Inverse of vec for square matrices"""
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return v.reshape(dim, dim).T


def matrix_unit(i: int, j: int, dim: int) -> np.ndarray:
    """Return |i><j| of the given dimension (indices from 0)"""
    unit = np.zeros((dim, dim), dtype=complex)
    unit[i, j] = 1
    return unit


class KrausSet:
    """Kraus representation X -> sum_k K_k X K_k^dagger

    :param operators: list of square matrices of equal dimension
    :raises InvalidOperandError: if operators are not square or differ in size
    """

    def __init__(self, operators: Sequence[np.ndarray]) -> None:
        operators = [np.asarray(K, dtype=complex) for K in operators]
        if len(operators) == 0:
            raise InvalidOperandError("KrausSet should contain at least one operator")
        shapes = {K.shape for K in operators}
        if len(shapes) != 1:
            raise InvalidOperandError(f"Kraus operators have different shapes {shapes}")
        shape = operators[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise InvalidOperandError(f"Kraus operators of shape {shape} are not square")
        self.operators = operators

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """Evaluate sum_k K_k X K_k^dagger directly"""
        return sum(K @ X @ K.conj().T for K in self.operators)

    def __len__(self) -> int:
        return len(self.operators)


class ChoiMatrix:
    """Unnormalized Choi matrix of a superoperator

    :param matrix: d^2 x d^2 Hermitian matrix, output factor first
    :param dim: system dimension d
    """

    def __init__(self, matrix: np.ndarray, dim: int) -> None:
        assert matrix.shape == (dim * dim, dim * dim)
        self.matrix = matrix
        self.dim = dim

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the (Hermitized) Choi matrix"""
        hmat = (self.matrix + self.matrix.conj().T) / 2
        return float(np.linalg.eigvalsh(hmat)[0])

    def is_cp(self, tol: float = TOL_PSD) -> bool:
        """Check complete positivity: smallest eigenvalue >= -tol"""
        return self.min_eigenvalue() >= -tol

    def is_tp(self, tol: float = TOL_TP) -> bool:
        """Check trace preservation: partial trace over output equals identity"""
        reduced = partial_trace(self.matrix, (self.dim, self.dim), keep=KEEP_SECOND)
        return bool(np.max(np.abs(reduced - np.eye(self.dim))) <= tol)


class SuperOp:
    """Linear map on d x d operators in the column-stacking convention

    :param matrix: d^2 x d^2 complex matrix
    :raises InvalidOperandError: if the matrix is not square of size d^2
    """

    def __init__(self, matrix: np.ndarray) -> None:
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidOperandError(f"Superoperator of shape {matrix.shape} is not square")
        dim = int(round(np.sqrt(matrix.shape[0])))
        if dim * dim != matrix.shape[0]:
            raise InvalidOperandError(f"Superoperator size {matrix.shape[0]} is not a square")
        self.matrix = matrix
        self.dim = dim

    @classmethod
    def identity(cls, dim: int) -> SuperOp:
        """Identity map on dim x dim operators"""
        return cls(np.eye(dim * dim, dtype=complex))

    @classmethod
    def from_kraus(cls, kraus: KrausSet) -> SuperOp:
        """Superoperator sum_k conj(K_k) (x) K_k of a Kraus set"""
        if not isinstance(kraus, KrausSet):
            kraus = KrausSet(kraus)
        return cls(sum(np.kron(K.conj(), K) for K in kraus.operators))

    @classmethod
    def from_function(cls, fun: Callable[[np.ndarray], np.ndarray], dim: int) -> SuperOp:
        """Superoperator of a linear function, evaluated on matrix units

        :param fun: linear map on dim x dim matrices
        :param dim: dimension of the operators
        :return: the superoperator
        """
        matrix = np.zeros((dim * dim, dim * dim), dtype=complex)
        for j in range(dim):
            for i in range(dim):
                matrix[:, j * dim + i] = vec(fun(matrix_unit(i, j, dim)))
        return cls(matrix)

    @classmethod
    def transposition(cls, dim: int) -> SuperOp:
        """The transposition X -> X^T, positive but not completely positive"""
        return cls.from_function(lambda X: X.T, dim)

    def __add__(self, other: SuperOp) -> SuperOp:
        _check_same_dim(self, other)
        return SuperOp(self.matrix + other.matrix)

    def __sub__(self, other: SuperOp) -> SuperOp:
        _check_same_dim(self, other)
        return SuperOp(self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> SuperOp:
        return SuperOp(scalar * self.matrix)

    __rmul__ = __mul__

    def __matmul__(self, other: SuperOp) -> SuperOp:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"SuperOp(dim={self.dim})"

    def max_abs_diff(self, other: SuperOp) -> float:
        """Largest absolute entrywise difference of the matrices"""
        _check_same_dim(self, other)
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def isclose(self, other: SuperOp, tol: float = 1e-12) -> bool:
        """Check if matrices agree entrywise within tol"""
        return self.dim == other.dim and self.max_abs_diff(other) <= tol

    def ampliate(self, k: int) -> SuperOp:
        """Return S (x) id_k acting on (dim*k) x (dim*k) operators

        The system factor comes first, i.e. X[(i,a),(j,b)] with system indices
        i, j and ancilla indices a, b.

        :param k: ancilla dimension
        :return: the extended superoperator
        """
        if k < 1:
            raise ValueError(f"Ancilla dimension {k} should be positive")
        if k == 1:
            return self
        d = self.dim
        big_dim = d * k
        big = np.zeros((big_dim**2, big_dim**2), dtype=complex)
        r = np.arange(d * d)
        rows, cols = r % d, r // d
        for a in range(k):
            for b in range(k):
                idx = (cols * k + b) * big_dim + rows * k + a
                big[np.ix_(idx, idx)] = self.matrix
        return SuperOp(big)

    def to_choi(self) -> ChoiMatrix:
        """Unnormalized Choi matrix sum_ij S(|i><j|) (x) |i><j|"""
        d = self.dim
        choi = np.zeros((d * d, d * d), dtype=complex)
        for j in range(d):
            for i in range(d):
                image = unvec(self.matrix[:, j * d + i], d)
                choi += np.kron(image, matrix_unit(i, j, d))
        return ChoiMatrix(choi, d)

    def is_cp(self, tol: float = TOL_PSD) -> bool:
        """Check complete positivity via the Choi matrix"""
        return self.to_choi().is_cp(tol)

    def is_tp(self, tol: float = TOL_TP) -> bool:
        """Check trace preservation via the Choi matrix"""
        return self.to_choi().is_tp(tol)

    def image_basis(self, tol: float = RANK_RTOL) -> np.ndarray:
        """Orthonormal basis of the image in (vectorized) operator space

        Singular vectors with singular value above tol times the largest one
        are kept.

        :param tol: relative singular-value cutoff
        :return: matrix with basis vectors in columns
        """
        U, s, _ = np.linalg.svd(self.matrix)
        if s[0] == 0:
            return U[:, :0]
        rank = int(np.sum(s > tol * s[0]))
        return U[:, :rank]

    def rank(self, tol: float = RANK_RTOL) -> int:
        """Dimension of the image"""
        return self.image_basis(tol).shape[1]


def _check_same_dim(S1: SuperOp, S2: SuperOp) -> None:
    if S1.dim != S2.dim:
        raise InvalidOperandError(f"Superoperators of dimension {S1.dim} and {S2.dim} mismatch")


@multimethod
def apply(S: SuperOp, X: np.ndarray) -> np.ndarray:
    """Apply the superoperator to a single operator"""
    X = np.asarray(X)
    if X.shape != (S.dim, S.dim):
        raise InvalidOperandError(f"Operator of shape {X.shape} does not match dim {S.dim}")
    return unvec(S.matrix @ vec(X), S.dim)


@apply.register
def apply_probeset(S: SuperOp, probes: ProbeSet) -> np.ndarray:
    """Apply the superoperator to every probe, returns array (count, dim, dim)"""
    if probes.dim != S.dim:
        raise InvalidOperandError(f"Probes of dim {probes.dim} do not match dim {S.dim}")
    return _apply_batch(S, probes.as_array())


def _apply_batch(S: SuperOp, batch: np.ndarray) -> np.ndarray:
    n, d = batch.shape[0], S.dim
    vecs = np.swapaxes(batch, 1, 2).reshape(n, d * d)
    out = vecs @ S.matrix.T
    return np.swapaxes(out.reshape(n, d, d), 1, 2)


def compose(S2: SuperOp, S1: SuperOp) -> SuperOp:
    """Composition S2 after S1"""
    _check_same_dim(S2, S1)
    return SuperOp(S2.matrix @ S1.matrix)


def positivity_sample(S: SuperOp, n: int, seed: int) -> Tuple[float, Optional[np.ndarray]]:
    """Sample positivity of a map on random pure states

    A negative result beyond -TOL_PSD certifies that S is not positive and
    the worst state is returned as witness. Otherwise the result is only an
    evidence of positivity, and no witness is returned.

    :param S: the checked map
    :param n: number of sampled pure states
    :param seed: seed of the generator
    :return: smallest eigenvalue found and the witness state or None
    """
    if n < 1:
        raise ValueError(f"Sample size {n} should be positive")
    rng = np.random.default_rng(seed)
    states = random_pure_states(S.dim, n, rng)
    images = _apply_batch(S, states)
    images = (images + np.conj(np.swapaxes(images, 1, 2))) / 2
    min_eigs = np.linalg.eigvalsh(images)[:, 0]
    worst = int(np.argmin(min_eigs))
    min_eig = float(min_eigs[worst])
    witness = states[worst] if min_eig < -TOL_PSD else None
    return min_eig, witness


def image_basis(S: SuperOp, tol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of Im(S), see SuperOp.image_basis"""
    return S.image_basis(tol)


def subspace_residual(basis: np.ndarray, reference: np.ndarray) -> float:
    """Spectral norm of the part of span(basis) outside span(reference)

    Both arguments have orthonormal columns.
    """
    if basis.shape[1] == 0:
        return 0.0
    outside = basis - reference @ (reference.conj().T @ basis)
    return float(np.linalg.norm(outside, 2))


def image_inclusion_residuals(family, grid: Sequence[float], tol: float = RANK_RTOL) -> DataFrame:
    """Residuals of Im(Lambda_t) in Im(Lambda_s) for consecutive grid points

    :param family: object with method at(t) returning SuperOp
    :param grid: ascending times
    :param tol: relative singular-value cutoff
    :return: DataFrame with columns s, t, rank_s, rank_t, residual
    """
    grid = list(grid)
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("Grid should be ascending")
    bases = [family.at(t).image_basis(tol) for t in grid]
    rows: List[dict] = []
    for (s, basis_s), (t, basis_t) in zip(zip(grid, bases), zip(grid[1:], bases[1:])):
        rows.append(
            {
                "s": s,
                "t": t,
                "rank_s": basis_s.shape[1],
                "rank_t": basis_t.shape[1],
                "residual": subspace_residual(basis_t, basis_s),
            }
        )
    return DataFrame(rows, columns=["s", "t", "rank_s", "rank_t", "residual"])


def is_image_nonincreasing(family, grid: Sequence[float], tol: float = RANK_RTOL) -> bool:
    """Check Im(Lambda_t) subset of Im(Lambda_s) for consecutive s < t of the grid

    Inclusion is accepted if the projection residual is below tol.
    """
    residuals = image_inclusion_residuals(family, grid, tol)
    return bool((residuals["residual"] < tol).all())
