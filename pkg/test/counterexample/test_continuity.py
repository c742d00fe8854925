import pytest

from qmarkov.counterexample.continuity import continuity_report, derivative_continuity_report
from qmarkov.counterexample.params import MapParams


def decreasing(values):
    return all(b < a for a, b in zip(values, values[1:]))


class TestContinuity:
    def test_default_ladder(self):
        report = continuity_report()
        assert list(report.columns) == ["junction", "epsilon", "gap", "slope"]
        assert len(report) == 9
        for _, gaps in report.groupby("junction")["gap"]:
            assert decreasing(list(gaps))
            assert gaps.iloc[-1] < 1e-3

    def test_single_epsilon(self):
        report = continuity_report(MapParams(theta=1.2), 1e-3)
        assert list(report["junction"]) == [1, 2, 3]
        assert (report["gap"] < 1e-2).all()

    def test_invalid_epsilon(self):
        with pytest.raises(ValueError):
            continuity_report(epsilon=0.6)
        with pytest.raises(ValueError):
            continuity_report(epsilon=[1e-2, 0])


class TestDerivativeContinuity:
    def test_smooth_variant(self):
        report = derivative_continuity_report(MapParams(theta=1.55, delta=1.05))
        assert list(report.columns) == ["junction", "epsilon", "left", "right", "gap"]
        for _, gaps in report.groupby("junction")["gap"]:
            assert decreasing(list(gaps))

    def test_kink_at_t3(self):
        report = derivative_continuity_report(MapParams(), [1e-3, 1e-4])
        at_t3 = report[report["junction"] == 3]
        assert (at_t3["gap"] > 0.5).all()
