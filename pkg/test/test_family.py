import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmarkov.counterexample.maps import generator_L0
from qmarkov.family import ConjugatedFamily, ConstantFamily, PiecewiseFamily, SemigroupFamily
from qmarkov.operators import InvalidOperandError, random_probes
from qmarkov.superop import SuperOp, apply
from qmarkov.utils.utils import random_unitary


class TestConstantFamily:
    def test_identity(self):
        family = ConstantFamily(dim=2, t_max=3.0)
        assert family.dim == 2
        assert family.at(2.5).isclose(SuperOp.identity(2))
        with pytest.raises(ValueError):
            family.at(3.5)
        with pytest.raises(ValueError):
            family.at(-0.1)
        with pytest.raises(ValueError):
            ConstantFamily()

    def test_times(self):
        family = ConstantFamily(dim=2)
        assert family.times(np.array([0, 0.5, 1])) == [0.0, 0.5, 1.0]
        with pytest.raises(ValueError):
            family.times([0.5, 0.2])
        with pytest.raises(ValueError):
            family.times([0.5, 1.5])


class TestSemigroupFamily:
    def test_semigroup(self):
        family = SemigroupFamily(generator_L0(), t_max=2.0)
        assert family.at(0.0).isclose(SuperOp.identity(3))
        assert family.at(0.7).isclose(family.at(0.3) @ family.at(0.4), 1e-12)
        assert family.at(1.5).is_cp() and family.at(1.5).is_tp()

    def test_dephasing(self):
        family = SemigroupFamily(generator_L0(), t_max=1.0)
        X = np.ones((3, 3))
        expected = np.full((3, 3), np.exp(-4 * 0.25))
        np.fill_diagonal(expected, 1)
        assert_allclose(apply(family.at(0.25), X), expected, atol=1e-12)


class TestConjugatedFamily:
    def test_rotation(self):
        U = random_unitary(3, seed=2)
        base = SemigroupFamily(generator_L0(), t_max=1.0)
        family = ConjugatedFamily(base, U)
        X = random_probes(3, 1, seed=0).probes[0]
        expected = U @ apply(base.at(0.5), U.conj().T @ X @ U) @ U.conj().T
        assert_allclose(apply(family.at(0.5), X), expected, atol=1e-12)
        assert family.at(0.0).isclose(SuperOp.identity(3))
        assert family.t_max == base.t_max
        with pytest.raises(InvalidOperandError):
            ConjugatedFamily(base, np.eye(2))


class TestPiecewiseFamily:
    def test_intervals(self):
        first, second = SuperOp.identity(2), SuperOp.transposition(2)
        family = PiecewiseFamily([0, 1, 2], [first, second])
        assert family.at(0.5) is first
        assert family.at(1.0) is second
        assert family.at(2.0) is second
        assert family.t_max == 2

    def test_invalid(self):
        maps = [SuperOp.identity(2)]
        with pytest.raises(ValueError):
            PiecewiseFamily([0, 1, 2], maps)
        with pytest.raises(ValueError):
            PiecewiseFamily([0.5, 1], maps)
        with pytest.raises(ValueError):
            PiecewiseFamily([0, 1, 1], maps * 2)
