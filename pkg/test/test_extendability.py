import numpy as np
import pytest

from qmarkov import Verifier
from qmarkov.checks import CheckAbs, CheckResult, can_run, default_checks, run
from qmarkov.checks.check import PASS, status_of
from qmarkov.family import ConstantFamily, DynamicalMapAbs
from qmarkov.superop import SuperOp, apply


class TestNewCheck:
    def test_unital(self):
        class UnitalCheck(CheckAbs):
            tag = "unital"

            def __init__(self, tol: float) -> None:
                super().__init__()
                self.tol = tol

        @run.register
        def run_unital(family: DynamicalMapAbs, check: UnitalCheck) -> CheckResult:
            assert can_run(family, check)
            identity = np.eye(family.dim)
            errors = [
                np.max(np.abs(apply(family.at(t), identity) - identity))
                for t in np.linspace(0, family.t_max, 5)
            ]
            return CheckResult(check.tag, status_of(max(errors) <= check.tol))

        @can_run.register
        def can_run_unital(family: DynamicalMapAbs, check: UnitalCheck) -> bool:
            return check.tol > 0

        verifier = Verifier(ConstantFamily(dim=3), [UnitalCheck(1e-12)])
        verifier.verify()
        assert verifier.passed
        replacement = SuperOp.from_function(lambda X: np.trace(X) * np.diag([1.0, 0.0]), 2)
        assert run(ConstantFamily(replacement), UnitalCheck(1e-12)).status != PASS
        with pytest.raises(ValueError):
            Verifier(ConstantFamily(dim=3)).run(UnitalCheck(-1))

    def test_missing_functions(self):
        class PurityCheck(CheckAbs):
            def __init__(self) -> None:
                super().__init__()

        family = ConstantFamily(dim=2)
        with pytest.raises(NotImplementedError):
            run(family, PurityCheck())
        with pytest.raises(NotImplementedError):
            can_run(family, PurityCheck())


class TestNewFamily:
    def test_amplitude_damping(self):
        class AmplitudeDamping(DynamicalMapAbs):
            def __init__(self, t_max: float) -> None:
                self.dim = 2
                self.t_max = t_max

            def at(self, t: float) -> SuperOp:
                self._check_time(t)
                p = 1 - np.exp(-t)
                K0 = np.array([[1, 0], [0, np.sqrt(1 - p)]])
                K1 = np.array([[0, np.sqrt(p)], [0, 0]])
                return SuperOp.from_kraus([K0, K1])

        family = AmplitudeDamping(t_max=2.0)
        checks = default_checks(family)
        for check in checks:
            check.grid_size = 20
        checks[1].probes = 50
        verifier = Verifier(family, checks)
        verifier.verify()
        assert verifier.passed
