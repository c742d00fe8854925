import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmarkov.contractivity.closed_form import (
    bound_chain_check,
    gamma4_derivative_closed_form,
    gamma4_derivative_symbolic,
    gamma4_norm_closed_form,
    gamma4_norm_numeric,
    is_singular,
    lambda_monotonicity_check,
    lambda_reflection_check,
    polynomial_majorant,
    polynomial_majorant_roots,
    theta_window_sweep,
)
from qmarkov.counterexample.constants import CONSTANTS
from qmarkov.counterexample.maps import gamma_family
from qmarkov.counterexample.params import MapParams
from qmarkov.operators import right_derivative, trace_norm
from qmarkov.superop import apply

LAMBDAS = np.linspace(0, 10, 101)
TAUS = np.linspace(0, 1, 101)


class TestNormClosedForm:
    def test_numeric_agreement(self):
        rng = np.random.default_rng(0)
        for delta in (1.0, 1.05):
            for lam, tau in zip(rng.uniform(0, 10, 20), rng.uniform(0, 1, 20)):
                assert gamma4_norm_closed_form(lam, tau, 1.5, delta) == pytest.approx(
                    gamma4_norm_numeric(lam, tau, 1.5, delta), abs=1e-10
                )

    def test_values(self):
        assert gamma4_norm_closed_form(0.0, 0.3, 1.5) == pytest.approx(1.0)
        assert gamma4_norm_closed_form(1.0, 0.0, 1.5) == pytest.approx(1.0)
        assert gamma4_norm_closed_form(1.0, 1.0, 1.5) == pytest.approx(2 * abs(np.cos(1.5)))

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma4_norm_closed_form(-1.0, 0.5, 1.5)
        with pytest.raises(ValueError):
            gamma4_derivative_closed_form(1.0, 1.5, 1.5)


class TestDerivative:
    def test_nonpositive_in_window(self):
        lam, tau = np.meshgrid(LAMBDAS, TAUS)
        values = gamma4_derivative_closed_form(lam, tau, 1.5)
        assert np.nanmax(values) <= 1e-12

    def test_finite_differences(self):
        h = 1e-6
        for delta in (1.0, 1.05):
            for lam in (0.3, 2.0, 7.5):
                for tau in (0.2, 0.55, 0.9):
                    difference = (
                        gamma4_norm_closed_form(lam, tau + h, 1.5, delta)
                        - gamma4_norm_closed_form(lam, tau - h, 1.5, delta)
                    ) / (2 * h)
                    value = gamma4_derivative_closed_form(lam, tau, 1.5, delta)
                    assert value == pytest.approx(difference, abs=1e-6)

    def test_right_derivative_of_family(self):
        params = MapParams()
        X = CONSTANTS.rhoA - CONSTANTS.rhoB

        def norm(tau: float) -> float:
            return trace_norm(apply(gamma_family(4, tau, params), X))

        estimate = right_derivative(norm, 0.5)
        closed_form = float(gamma4_derivative_closed_form(1.0, 0.5, 1.5))
        assert estimate == pytest.approx(closed_form, abs=1e-6)
        assert estimate == pytest.approx(-0.546383806, abs=1e-6)

    def test_symbolic_oracle(self):
        lam, tau = np.meshgrid([0.5, 2.0, 5.0], [0.1, 0.4, 0.8])
        for theta, delta in ((1.5, 1.0), (1.2, 1.0), (1.55, 1.05)):
            assert_allclose(
                gamma4_derivative_symbolic(lam, tau, theta, delta),
                gamma4_derivative_closed_form(lam, tau, theta, delta),
                atol=1e-10,
            )

    def test_outside_window(self):
        value = gamma4_derivative_closed_form(1.0, 1.0, 1.6)
        assert value == pytest.approx(2 * abs(np.cos(1.6)) + 3.2 * np.sin(1.6), abs=1e-10)
        assert value == pytest.approx(3.257, abs=1e-3)
        assert gamma4_derivative_closed_form(1.0, 0.01, 1.3) == pytest.approx(0.0031, rel=0.2)

    def test_singular(self):
        assert is_singular(1.0, 1.0, np.pi / 2)
        assert not is_singular(2.0, 1.0, np.pi / 2)
        assert np.isnan(gamma4_derivative_closed_form(1.0, 1.0, np.pi / 2))

    def test_smooth_variant_small_tau(self):
        assert gamma4_derivative_closed_form(1.0, 0.02, 1.55, 1.05) > 1e-3
        assert gamma4_derivative_closed_form(1.0, 0.5, 1.55, 1.05) < 0


class TestThetaWindowSweep:
    def test_window(self):
        sweep = theta_window_sweep([1.0, 1.2, 1.4, 1.5, 1.6, 1.7], TAUS, LAMBDAS)
        positive = dict(zip(sweep["theta"], sweep["positive"]))
        assert positive == {1.0: True, 1.2: True, 1.4: True, 1.5: False, 1.6: True, 1.7: True}
        row = sweep.set_index("theta").loc[1.6]
        assert row["argmax_lambda"] == 1.0
        assert row["argmax_tau"] == 1.0
        assert row["max_value"] == pytest.approx(3.257, abs=1e-3)
        assert row["positive_at_one"]
        row = sweep.set_index("theta").loc[1.2]
        assert row["first_positive_tau"] < 0.1
        assert not sweep.set_index("theta").loc[1.5, "positive_at_one"]

    def test_columns(self):
        sweep = theta_window_sweep([1.5], [0.5, 1.0], [0.0, 1.0])
        assert list(sweep.columns) == [
            "theta",
            "max_value",
            "argmax_lambda",
            "argmax_tau",
            "positive",
            "first_positive_tau",
            "positive_at_one",
            "singular",
        ]
        assert np.isnan(sweep.loc[0, "first_positive_tau"])


class TestBoundChain:
    def test_chain(self):
        ledger = bound_chain_check(1.5, np.arange(1, 201) / 200)
        assert len(ledger) == 200
        assert ledger["ok"].all()
        assert (ledger["argmax_lambda"] >= 1).all()

    def test_chain_fails_below_window(self):
        ledger = bound_chain_check(1.2, np.arange(1, 201) / 200)
        assert not ledger["ok"].all()
        with pytest.raises(ValueError):
            bound_chain_check(1.6, [0.5])

    def test_majorant(self):
        assert polynomial_majorant(1.5, 0.5) < 0
        assert polynomial_majorant(1.2, 0.5) > 0
        assert polynomial_majorant_roots(1.5) == [0.0]
        roots = polynomial_majorant_roots(1.2)
        assert len(roots) == 3
        assert_allclose(roots, [-0.8648, 0.0, 0.8648], atol=1e-3)

    def test_monotonicity(self):
        table = lambda_monotonicity_check(np.linspace(0, 1.5, 31), np.arange(1.0, 11.0))
        assert list(table.columns) == ["angle", "lam", "slope", "ratio", "ok"]
        assert table["ok"].all()
        with pytest.raises(ValueError):
            lambda_monotonicity_check([0.5], [0.5])

    def test_reflection(self):
        rng = np.random.default_rng(1)
        lam, tau = rng.uniform(0.01, 0.99, 500), rng.uniform(0, 1, 500)
        assert lambda_reflection_check(lam, tau, 1.5)
        assert lambda_reflection_check(lam, tau, 1.55, 1.05)
        assert lambda_reflection_check(lam, tau, 1.2)
        with pytest.raises(ValueError):
            lambda_reflection_check(1.5, 0.5, 1.5)
