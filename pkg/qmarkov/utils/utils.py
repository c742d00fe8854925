import numpy as np
from scipy.linalg import expm


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Generates random unitary as exponential of anti-Hermitian matrix

    :param dim: dimension of the unitary
    :param seed: seed of the generator
    :return: the unitary
    """
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return expm((A - A.conj().T) / 2)


def random_pure_states(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Generates projectors on normalized Gaussian vectors

    :param dim: dimension of the space
    :param count: number of states
    :param rng: numpy generator
    :return: array of shape (count, dim, dim) of rank one density operators
    """
    psi = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    return np.einsum("ni,nj->nij", psi, psi.conj())


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Generates projector on a normalized Gaussian vector, see random_pure_states"""
    return random_pure_states(dim, 1, rng)[0]
