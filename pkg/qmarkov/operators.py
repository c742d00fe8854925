"""Dense Hermitian-operator arithmetic

Hermitian operators are plain complex ``numpy`` arrays of shape (dim, dim).
Functions in this module validate their operands and raise
:class:`InvalidOperandError` when the Hermiticity or dimension requirements
are violated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Tuple, Union

import numpy as np

from .constants import DEFAULT_H0, TOL_HERM, TOL_PSD

HermOp = np.ndarray

RANDOM_HERMITIAN = "random-hermitian"
STATE_DIFFERENCE = "state-difference"
IMAGE_RESTRICTED = "image-restricted"
PROBE_KINDS = (RANDOM_HERMITIAN, STATE_DIFFERENCE, IMAGE_RESTRICTED)

KEEP_FIRST = "first"
KEEP_SECOND = "second"


class InvalidOperandError(ValueError):
    """Operand is not a valid Hermitian or density operator"""


def is_hermitian(X: np.ndarray, tol: float = TOL_HERM) -> bool:
    """Check if X is a square Hermitian matrix within tol

    :param X: the checked matrix
    :param tol: absolute tolerance on entries of X - X^dagger
    :return: flag stating if X is Hermitian
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 1:
        return False
    return bool(np.max(np.abs(X - X.conj().T)) <= tol)


def check_hermitian(X: np.ndarray, tol: float = TOL_HERM) -> np.ndarray:
    """Validate and return X as a complex Hermitian matrix

    :param X: the operator
    :param tol: absolute tolerance on entries of X - X^dagger
    :raises InvalidOperandError: if X is not square or not Hermitian
    :return: X as complex array
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] < 1:
        raise InvalidOperandError(f"Operator of shape {X.shape} is not square")
    if not is_hermitian(X, tol):
        raise InvalidOperandError(
            f"Operator is not Hermitian, deviation {np.max(np.abs(X - X.conj().T)):.3e}"
        )
    return X


def check_density(rho: np.ndarray, tol: float = TOL_HERM, psd_tol: float = TOL_PSD) -> np.ndarray:
    """Validate and return rho as a density operator

    Density operator is Hermitian, has unit trace and nonnegative spectrum
    (up to psd_tol).

    :param rho: the operator
    :param tol: tolerance for Hermiticity and trace
    :param psd_tol: tolerance for the smallest eigenvalue
    :raises InvalidOperandError: if rho is not a density operator
    :return: rho as complex array
    """
    rho = check_hermitian(rho, tol)
    trace = np.trace(rho).real
    if abs(trace - 1) > tol:
        raise InvalidOperandError(f"Density operator has trace {trace}")
    min_eig = np.linalg.eigvalsh(rho)[0]
    if min_eig < -psd_tol:
        raise InvalidOperandError(f"Density operator has negative eigenvalue {min_eig}")
    return rho


def is_density(rho: np.ndarray, tol: float = TOL_HERM, psd_tol: float = TOL_PSD) -> bool:
    """Check if rho is a density operator

    :param rho: the operator
    :param tol: tolerance for Hermiticity and trace
    :param psd_tol: tolerance for the smallest eigenvalue
    :return: flag stating if rho is a density operator
    """
    try:
        check_density(rho, tol, psd_tol)
    except InvalidOperandError:
        return False
    return True


def trace_norm(X: np.ndarray) -> float:
    """Compute trace norm of a Hermitian operator

    Sum of absolute values of the eigenvalues, computed with a Hermitian
    eigensolver.

    :param X: Hermitian operator
    :raises InvalidOperandError: if X is not Hermitian
    :return: the trace norm
    """
    X = check_hermitian(X)
    return float(np.sum(np.abs(np.linalg.eigvalsh(X))))


def trace_norms(batch: np.ndarray) -> np.ndarray:
    """Trace norms of a stack of Hermitian operators

    The stack is Hermitized before the eigensolver is called, so that
    round-off asymmetry of mapped operators does not leak into the result.

    :param batch: array of shape (n, dim, dim)
    :return: array of n trace norms
    """
    batch = np.asarray(batch, dtype=complex)
    batch = (batch + np.conj(np.swapaxes(batch, -1, -2))) / 2
    return np.sum(np.abs(np.linalg.eigvalsh(batch)), axis=-1)


def tensor(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product A (x) B of Hermitian operators

    :param A: first factor
    :param B: second factor
    :return: the product of dimension dim(A) * dim(B)
    """
    return np.kron(check_hermitian(A), check_hermitian(B))


def partial_trace(X: np.ndarray, dims: Tuple[int, int], keep: str = KEEP_FIRST) -> np.ndarray:
    """Partial trace of a bipartite operator

    :param X: operator on a space of dimension dA * dB
    :param dims: pair (dA, dB)
    :param keep: "first" traces out the second factor, "second" traces out
        the first one
    :raises InvalidOperandError: if dimensions do not match
    :return: the reduced operator
    """
    X = np.asarray(X, dtype=complex)
    d_a, d_b = dims
    if X.ndim != 2 or X.shape != (d_a * d_b, d_a * d_b):
        raise InvalidOperandError(f"Operator of shape {X.shape} does not match dims {dims}")
    X4 = X.reshape(d_a, d_b, d_a, d_b)
    if keep == KEEP_FIRST:
        return np.einsum("ijkj->ik", X4)
    elif keep == KEEP_SECOND:
        return np.einsum("ijil->jl", X4)
    else:
        raise ValueError(f"Unknown keep value {keep}")


def right_derivative(
    f: Callable[[float], Union[float, np.ndarray]], t: float, h0: float = None
) -> Union[float, np.ndarray]:
    """Estimate the right derivative of f at t

    Forward differences with steps h0, h0/2 and h0/4 are combined with two
    levels of Richardson extrapolation. f may return an array, in which case
    the estimate is computed elementwise.

    :param f: evaluated function, defined on [t, t + h0]
    :param t: the point
    :param h0: the largest step, defaults to DEFAULT_H0
    :return: extrapolated right derivative
    """
    if h0 is None:
        h0 = DEFAULT_H0
    if h0 <= 0:
        raise ValueError(f"Step {h0} should be positive")
    f0 = np.asarray(f(t), dtype=float)
    steps = (h0, h0 / 2, h0 / 4)
    d1, d2, d4 = [(np.asarray(f(t + h), dtype=float) - f0) / h for h in steps]
    # forward differences have error c1*h + c2*h^2 + ...
    r1 = 2 * d2 - d1
    r2 = 2 * d4 - d2
    result = (4 * r2 - r1) / 3
    if np.ndim(result) == 0:
        return float(result)
    return result


@dataclass(frozen=True, eq=False)
class ProbeSet:
    """Seeded set of Hermitian probe operators

    :param probes: list of operators of equal dimension
    :param seed: seed used for generation
    :param kind: one of PROBE_KINDS
    """

    probes: List[np.ndarray] = field(repr=False)
    seed: int
    kind: str

    def __post_init__(self) -> None:
        if len(self.probes) == 0:
            raise ValueError("ProbeSet should contain at least one probe")
        dims = {p.shape for p in self.probes}
        if len(dims) != 1:
            raise InvalidOperandError(f"Probes have different shapes {dims}")

    @property
    def dim(self) -> int:
        return self.probes[0].shape[0]

    def __len__(self) -> int:
        return len(self.probes)

    def as_array(self) -> np.ndarray:
        """Return probes stacked into array of shape (count, dim, dim)"""
        return np.stack(self.probes)


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    rank = int(rng.integers(1, dim + 1))
    ginibre = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = ginibre @ ginibre.conj().T
    return rho / np.trace(rho).real


def random_probes(dim: int, count: int, seed: int, kind: str = RANDOM_HERMITIAN) -> ProbeSet:
    """Generate a deterministic set of probe operators

    "random-hermitian" draws Gaussian real and imaginary parts and
    Hermitizes them. "state-difference" returns p1*rho1 - p2*rho2 for
    random states of random rank and p1 uniform in [0, 1], p2 = 1 - p1.
    "image-restricted" returns random real diagonal operators.

    :param dim: dimension of the probes
    :param count: number of probes
    :param seed: seed of the generator
    :param kind: one of PROBE_KINDS
    :raises ValueError: if count < 1 or kind is unknown
    :return: the probe set
    """
    if count < 1:
        raise ValueError(f"Number of probes {count} should be positive")
    rng = np.random.default_rng(seed)
    probes = []
    if kind == RANDOM_HERMITIAN:
        for _ in range(count):
            A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            probes.append((A + A.conj().T) / 2)
    elif kind == STATE_DIFFERENCE:
        for _ in range(count):
            p1 = rng.uniform(0, 1)
            rho1 = _random_state(rng, dim)
            rho2 = _random_state(rng, dim)
            X = p1 * rho1 - (1 - p1) * rho2
            probes.append((X + X.conj().T) / 2)
    elif kind == IMAGE_RESTRICTED:
        for _ in range(count):
            probes.append(np.diag(rng.normal(size=dim)).astype(complex))
    else:
        raise ValueError(f"Unknown probe kind {kind}")
    return ProbeSet(probes, seed, kind)
