import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmarkov.counterexample.constants import CONSTANTS, ket
from qmarkov.counterexample.maps import QutritCounterexample, generator_L0
from qmarkov.counterexample.params import MapParams
from qmarkov.divisibility import (
    CP,
    EXACT,
    IMAGE_RESTRICTED,
    INCONSISTENT,
    NOT_CP,
    UNDEFINED,
    cp_divisibility_scan,
    hermitian_basis,
    image_boundary_states,
    intermediate_map,
    positive_forcing_witness,
)
from qmarkov.family import ConjugatedFamily, PiecewiseFamily, SemigroupFamily
from qmarkov.superop import SuperOp, apply, image_inclusion_residuals, is_image_nonincreasing
from qmarkov.utils.utils import random_pure_state, random_unitary


class TestIntermediateMap:
    def test_semigroup(self):
        family = SemigroupFamily(generator_L0(), t_max=1.0)
        inter = intermediate_map(family, 0.2, 0.7)
        assert inter.definedness == EXACT
        assert inter.rank == 9
        assert inter.residual < 1e-10
        assert inter.map.isclose(family.at(0.5), 1e-10)

    def test_image_restricted(self):
        family = QutritCounterexample()
        inter = intermediate_map(family, 3.0, 4.0)
        assert inter.definedness == IMAGE_RESTRICTED
        assert inter.rank == 2
        assert inter.residual < 1e-10

    def test_inconsistent(self):
        projection = SuperOp.from_kraus([np.diag([1.0, 0.0])])
        family = PiecewiseFamily([0, 1, 2], [projection, SuperOp.identity(2)])
        inter = intermediate_map(family, 0.5, 1.5)
        assert inter.definedness == INCONSISTENT
        assert inter.rank == 1

    def test_cocycle(self):
        family = QutritCounterexample()
        r, s, t = 0.2, 0.5, 0.8
        first, second = intermediate_map(family, r, s), intermediate_map(family, s, t)
        direct = intermediate_map(family, r, t)
        assert direct.definedness == EXACT
        assert (second.map @ first.map).isclose(direct.map, 1e-10)

    def test_invalid_times(self):
        family = QutritCounterexample()
        with pytest.raises(ValueError):
            intermediate_map(family, 2.0, 1.0)
        with pytest.raises(ValueError):
            intermediate_map(family, 3.0, 5.0)


class TestCPDivisibilityScan:
    def test_semigroup(self):
        family = SemigroupFamily(generator_L0(), t_max=1.0)
        grid = np.linspace(0, 1, 6)
        report = cp_divisibility_scan(family, grid)
        assert list(report.columns) == [
            "s",
            "t",
            "definedness",
            "rank",
            "residual",
            "min_choi",
            "tp",
            "verdict",
        ]
        assert len(report) == 5
        assert (report["verdict"] == CP).all()
        assert report["tp"].all()

        rng = np.random.default_rng(11)
        for s, t in zip(grid, grid[1:]):
            V = intermediate_map(family, s, t).map
            for _ in range(100):
                image = apply(V, random_pure_state(3, rng))
                assert np.linalg.eigvalsh((image + image.conj().T) / 2)[0] >= -1e-10

    def test_counterexample(self):
        family = QutritCounterexample()
        report = cp_divisibility_scan(family, [0.2, 0.6, 3.0, 4.0])
        assert list(report["verdict"]) == [CP, CP, NOT_CP]
        assert list(report["definedness"]) == [EXACT, EXACT, IMAGE_RESTRICTED]

    def test_inconsistent(self):
        projection = SuperOp.from_kraus([np.diag([1.0, 0.0])])
        family = PiecewiseFamily([0, 1, 2], [projection, SuperOp.identity(2)])
        report = cp_divisibility_scan(family, [0.5, 1.5])
        assert list(report["verdict"]) == [UNDEFINED]


class TestForcingWitness:
    def test_default(self):
        witness = positive_forcing_witness(QutritCounterexample(), 3.0, 4.0)
        assert witness is not None
        assert witness.discrepancy == pytest.approx(2 * abs(np.cos(1.5)), abs=1e-9)
        assert witness.discrepancy == pytest.approx(0.141474, abs=1e-6)
        assert abs(np.vdot(ket(3), witness.shared_vector)) == pytest.approx(1, abs=1e-9)
        assert len(witness.origins) == 2
        assert witness.certifies()

    def test_near_half_pi(self):
        params = MapParams(theta=np.pi / 2 - 1e-3)
        witness = positive_forcing_witness(QutritCounterexample(params), 3.0, 4.0)
        assert witness.discrepancy == pytest.approx(2e-3, rel=0.1)
        assert witness.certifies()

    def test_half_pi(self):
        params = MapParams(theta=np.pi / 2)
        witness = positive_forcing_witness(QutritCounterexample(params), 3.0, 4.0)
        assert witness is None or not witness.certifies()

    def test_unitary_invariance(self):
        U = random_unitary(3, seed=3)
        rotated = ConjugatedFamily(QutritCounterexample(), U)
        assert rotated.at(0.0).isclose(SuperOp.identity(3))
        witness = positive_forcing_witness(rotated, 3.0, 4.0)
        assert witness is not None
        assert witness.certifies()
        assert witness.discrepancy == pytest.approx(2 * abs(np.cos(1.5)), abs=1e-9)
        assert abs(np.vdot(U @ ket(3), witness.shared_vector)) == pytest.approx(1, abs=1e-9)
        assert "boundary" in witness.origins

    def test_no_witness(self):
        family = SemigroupFamily(generator_L0(), t_max=1.0)
        witness = positive_forcing_witness(family, 0.2, 0.5)
        assert witness is None or not witness.certifies()
        with pytest.raises(ValueError):
            positive_forcing_witness(family, 0.5, 0.2)


class TestImageBoundary:
    def test_hermitian_basis(self):
        basis = hermitian_basis(3)
        assert len(basis) == 9
        gram = np.array([[np.trace(A.conj().T @ B).real for B in basis] for A in basis])
        assert_allclose(gram, np.eye(9), atol=1e-14)

    def test_segment(self):
        states = image_boundary_states(QutritCounterexample().at(3.0))
        assert len(states) == 2
        found = sorted(states, key=lambda rho: -rho[0, 0].real)
        assert_allclose(found[0], CONSTANTS.rhoA, atol=1e-10)
        assert_allclose(found[1], CONSTANTS.rhoB, atol=1e-10)

    def test_rotated_segment(self):
        U = random_unitary(3, seed=5)
        rotated = ConjugatedFamily(QutritCounterexample(), U)
        for rho in image_boundary_states(rotated.at(3.0)):
            assert np.trace(rho).real == pytest.approx(1)
            assert np.linalg.eigvalsh(rho)[0] == pytest.approx(0, abs=1e-10)


class TestImageStructure:
    def test_ranks(self):
        family = QutritCounterexample()
        ranks = [family.at(t).rank() for t in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0)]
        assert ranks == [9, 3, 3, 2, 2, 2, 2]

    def test_inclusion(self):
        family = QutritCounterexample()
        grid = np.linspace(3, 4, 5)
        residuals = image_inclusion_residuals(family, grid)
        assert list(residuals.columns) == ["s", "t", "rank_s", "rank_t", "residual"]
        assert residuals["residual"].max() > 0.01
        assert not is_image_nonincreasing(family, grid)
        assert is_image_nonincreasing(family, np.linspace(0.2, 0.9, 4))
        with pytest.raises(ValueError):
            image_inclusion_residuals(family, [2, 1])
