import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmarkov.operators import InvalidOperandError, random_probes, tensor
from qmarkov.superop import (
    KrausSet,
    SuperOp,
    apply,
    compose,
    image_basis,
    matrix_unit,
    positivity_sample,
    subspace_residual,
    unvec,
    vec,
)
from qmarkov.utils.utils import random_unitary


def dephasing(dim: int) -> SuperOp:
    return SuperOp.from_kraus([np.outer(e, e) for e in np.eye(dim)])


def random_channel(dim: int, count: int, seed: int) -> SuperOp:
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(count * dim, dim)) + 1j * rng.normal(size=(count * dim, dim))
    isometry, _ = np.linalg.qr(A)
    return SuperOp.from_kraus([isometry[k * dim : (k + 1) * dim] for k in range(count)])


class TestVectorization:
    def test_matrix_unit(self):
        for i in range(3):
            for j in range(3):
                v = vec(matrix_unit(i, j, 3))
                assert v[j * 3 + i] == 1
                assert np.count_nonzero(v) == 1

    def test_unvec(self):
        X = np.arange(9).reshape(3, 3)
        assert_allclose(unvec(vec(X)), X)
        assert_allclose(unvec(vec(X), 3), X)

    def test_sandwich(self):
        rng = np.random.default_rng(0)
        A, X, B = (rng.normal(size=(3, 3)) for _ in range(3))
        assert_allclose(vec(A @ X @ B), np.kron(B.T, A) @ vec(X), atol=1e-12)


class TestSuperOp:
    def test_kraus(self):
        U = random_unitary(3, seed=1)
        kraus = KrausSet([U / np.sqrt(2), np.eye(3) / np.sqrt(2)])
        S = SuperOp.from_kraus(kraus)
        X = random_probes(3, 1, seed=2).probes[0]
        assert_allclose(apply(S, X), kraus.evaluate(X), atol=1e-12)
        assert S.is_cp() and S.is_tp()
        assert len(kraus) == 2 and kraus.dim == 3

    def test_invalid_kraus(self):
        with pytest.raises(InvalidOperandError):
            KrausSet([])
        with pytest.raises(InvalidOperandError):
            KrausSet([np.eye(2), np.eye(3)])
        with pytest.raises(InvalidOperandError):
            KrausSet([np.ones((2, 3))])

    def test_invalid_matrix(self):
        with pytest.raises(InvalidOperandError):
            SuperOp(np.eye(5))
        with pytest.raises(InvalidOperandError):
            SuperOp(np.ones((4, 2)))
        with pytest.raises(InvalidOperandError):
            SuperOp.identity(2) + SuperOp.identity(3)

    def test_identity(self):
        S = SuperOp.identity(3)
        X = random_probes(3, 1, seed=0).probes[0]
        assert_allclose(apply(S, X), X)
        choi = S.to_choi()
        assert choi.min_eigenvalue() == pytest.approx(0, abs=1e-12)
        assert np.linalg.eigvalsh(choi.matrix)[-1] == pytest.approx(3)
        assert S.rank() == 9

    def test_transposition(self):
        T = SuperOp.transposition(2)
        assert not T.is_cp()
        assert T.is_tp()
        assert T.to_choi().min_eigenvalue() == pytest.approx(-1)
        min_eig, witness = positivity_sample(T, 100, seed=0)
        assert min_eig >= -1e-10
        assert witness is None

    def test_positivity_witness(self):
        min_eig, witness = positivity_sample(-1 * SuperOp.identity(2), 10, seed=0)
        assert min_eig == pytest.approx(-1)
        assert witness is not None
        with pytest.raises(ValueError):
            positivity_sample(SuperOp.identity(2), 0, seed=0)

    def test_negative_on_pure_states(self):
        S = SuperOp.from_function(lambda X: np.trace(X) * np.eye(3) / 3 - X / 2, 3)
        min_eig, witness = positivity_sample(S, 200, seed=1)
        assert min_eig == pytest.approx(-1 / 6, abs=1e-10)
        assert witness is not None

    def test_arithmetic(self):
        S = dephasing(3)
        I3 = SuperOp.identity(3)
        assert (0.5 * I3 + S * 0.5 - S).isclose(0.5 * (I3 - S))
        assert S.max_abs_diff(I3) == pytest.approx(1)
        assert not S.isclose(SuperOp.identity(2))

    def test_compose(self):
        U, V = random_unitary(3, seed=0), random_unitary(3, seed=1)
        SU, SV = SuperOp.from_kraus([U]), SuperOp.from_kraus([V])
        X = random_probes(3, 1, seed=3).probes[0]
        expected = V @ U @ X @ U.conj().T @ V.conj().T
        assert_allclose(apply(compose(SV, SU), X), expected, atol=1e-12)
        assert (SV @ SU).isclose(compose(SV, SU))

    def test_compose_associative(self):
        for seed in range(5):
            A, B, C = (random_channel(3, 2, 3 * seed + k) for k in range(3))
            assert compose(A, compose(B, C)).isclose(compose(compose(A, B), C), 1e-12)

    def test_tp_matches_traces(self):
        probes = random_probes(3, 100, seed=11)
        traces = np.trace(probes.as_array(), axis1=1, axis2=2)
        for S in (random_channel(3, 3, 0), random_channel(3, 3, 1) * 0.9, dephasing(3)):
            images = apply(S, probes)
            preserved = np.allclose(np.trace(images, axis1=1, axis2=2), traces, atol=1e-10)
            assert S.is_tp() == preserved
        assert not (random_channel(3, 3, 1) * 0.9).is_tp()

    def test_kraus_choi_positive(self):
        rng = np.random.default_rng(12)
        for count in (1, 2, 4):
            kraus = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(count)]
            assert SuperOp.from_kraus(kraus).to_choi().min_eigenvalue() >= -1e-10

    def test_apply_probeset(self):
        S = SuperOp.from_kraus([random_unitary(3, seed=5)])
        probes = random_probes(3, 7, seed=0)
        images = apply(S, probes)
        assert images.shape == (7, 3, 3)
        for X, image in zip(probes.probes, images):
            assert_allclose(apply(S, X), image, atol=1e-12)
        with pytest.raises(InvalidOperandError):
            apply(S, random_probes(2, 3, seed=0))
        with pytest.raises(InvalidOperandError):
            apply(S, np.eye(2))

    def test_ampliate(self):
        U = random_unitary(2, seed=4)
        S = SuperOp.from_kraus([U])
        A = np.array([[1, 2j], [-2j, 0.5]])
        B = np.diag([1.0, -1.0, 3.0])
        big = S.ampliate(3)
        assert big.dim == 6
        assert_allclose(apply(big, tensor(A, B)), np.kron(U @ A @ U.conj().T, B), atol=1e-12)
        assert SuperOp.identity(2).ampliate(2).isclose(SuperOp.identity(4))
        assert S.ampliate(1) is S
        with pytest.raises(ValueError):
            S.ampliate(0)

    def test_ampliated_transposition(self):
        bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
        image = apply(SuperOp.transposition(2).ampliate(2), np.outer(bell, bell))
        assert np.linalg.eigvalsh(image)[0] == pytest.approx(-0.5)


class TestImage:
    def test_rank(self):
        assert dephasing(3).rank() == 3
        assert image_basis(dephasing(2)).shape == (4, 2)
        assert SuperOp(np.zeros((4, 4))).rank() == 0

    def test_subspace_residual(self):
        basis = image_basis(dephasing(3))
        assert subspace_residual(basis, basis) == pytest.approx(0, abs=1e-12)
        assert subspace_residual(basis, image_basis(SuperOp.identity(3))) == pytest.approx(
            0, abs=1e-12
        )
        assert subspace_residual(image_basis(SuperOp.identity(3)), basis) == pytest.approx(1)
