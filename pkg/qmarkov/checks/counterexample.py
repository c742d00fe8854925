"""Checks of the qutrit construction

Each check compares the numerical family with a closed form or an exact
property of the construction. They are the default suite of
QutritCounterexample.
"""
import logging
from abc import abstractmethod
from typing import List, Sequence

import numpy as np
from pandas import DataFrame

from ..constants import EPSILON_LADDER, RANK_RTOL, SUPPORT_TOL, TOL_CLOSED
from ..contractivity.closed_form import (
    bound_chain_check,
    gamma4_derivative_closed_form,
    gamma4_norm_closed_form,
    gamma4_norm_numeric,
    lambda_monotonicity_check,
    lambda_reflection_check,
)
from ..counterexample.constants import CONSTANTS, ket, projector
from ..counterexample.continuity import continuity_report, derivative_continuity_report
from ..counterexample.maps import QutritCounterexample, gamma1_exponential, gamma_family
from ..divisibility import positive_forcing_witness
from ..superop import apply, image_inclusion_residuals, is_image_nonincreasing, matrix_unit
from .check import INCONCLUSIVE, CheckAbs, CheckResult, can_run, default_checks, run, status_of
from .generic import ContractivityCheck, DynamicalMapCheck

logger = logging.getLogger(__name__)


class QutritCheckAbs(CheckAbs):
    """Checks which only apply to the qutrit construction"""

    @abstractmethod
    def __init__(self) -> None:
        super().__init__()


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


class ContinuityCheck(QutritCheckAbs):
    """Gaps across the junctions shrink along the epsilon ladder

    :param epsilon: decreasing ladder
    :param final_gap: bound on the gap at the smallest epsilon
    """

    tag = "continuity"

    def __init__(self, epsilon: Sequence[float] = EPSILON_LADDER, final_gap: float = 1e-3) -> None:
        super().__init__()
        self.epsilon = tuple(epsilon)
        self.final_gap = final_gap


@run.register
def run_continuity(family: QutritCounterexample, check: ContinuityCheck) -> CheckResult:
    report = continuity_report(family.params, check.epsilon)
    ok = True
    for _, gaps in report.groupby("junction")["gap"]:
        ok &= _strictly_decreasing(list(gaps)) and gaps.iloc[-1] < check.final_gap
    summary = {"max_final_gap": float(report.groupby("junction")["gap"].last().max())}
    return CheckResult(check.tag, status_of(ok), report, summary)


class SmoothnessCheck(QutritCheckAbs):
    """Gaps of the time derivative across the junctions shrink along the ladder

    Holds for delta > 1 with the default rates.

    :param epsilon: decreasing ladder
    """

    tag = "smoothness"

    def __init__(self, epsilon: Sequence[float] = EPSILON_LADDER) -> None:
        super().__init__()
        self.epsilon = tuple(epsilon)


@run.register
def run_smoothness(family: QutritCounterexample, check: SmoothnessCheck) -> CheckResult:
    report = derivative_continuity_report(family.params, check.epsilon)
    ok = all(_strictly_decreasing(list(g)) for _, g in report.groupby("junction")["gap"])
    summary = {"max_final_gap": float(report.groupby("junction")["gap"].last().max())}
    return CheckResult(check.tag, status_of(ok), report, summary)


def _diag(x11: complex, x22: complex, x33: complex) -> np.ndarray:
    return np.diag([x11, x22, x33]).astype(complex)


_ENDPOINT_FORMS = (
    ("t1", lambda X: _diag(X[0, 0], X[1, 1], X[2, 2])),
    ("t2", lambda X: _diag(X[0, 0], X[1, 1] + X[2, 2], 0)),
    ("t3", lambda X: _diag(X[0, 0], X[1, 1] + X[2, 2], np.trace(X)) / 2),
)


class EndpointCheck(QutritCheckAbs):
    """Maps at the segment ends agree with their closed forms

    :param tol: largest accepted entrywise error
    """

    tag = "endpoints"

    def __init__(self, tol: float = 1e-12) -> None:
        super().__init__()
        self.tol = tol


@run.register
def run_endpoints(family: QutritCounterexample, check: EndpointCheck) -> CheckResult:
    params = family.params
    rows = []
    for (name, form), t in zip(_ENDPOINT_FORMS, params.times):
        S = family.at(t)
        for i in range(3):
            for j in range(3):
                unit = matrix_unit(i, j, 3)
                error = float(np.max(np.abs(apply(S, unit) - form(unit))))
                rows.append({"time": name, "input": f"|{i + 1}><{j + 1}|", "error": error})
    end = family.at(params.t4)
    targets = (projector(ket(1)), projector(CONSTANTS.theta_ket(params.theta)))
    for k, target in zip((1, 2), targets):
        error = float(np.max(np.abs(apply(end, projector(ket(k))) - target)))
        rows.append({"time": "t4", "input": f"|{k}><{k}|", "error": error})
    details = DataFrame(rows, columns=["time", "input", "error"])
    max_error = float(details["error"].max())
    summary = {"max_error": max_error}
    return CheckResult(check.tag, status_of(max_error <= check.tol), details, summary)


class ForcingCheck(QutritCheckAbs):
    """Forcing witness between t3 and t4 excludes P-divisibility

    The discrepancy is compared with 2|cos theta|, the trace distance of |1>
    and |theta>. A vanishing discrepancy (theta = pi/2) is inconclusive.

    :param tol: discrepancy threshold
    :param oracle_tol: accepted deviation from 2|cos theta|
    """

    tag = "not-P-divisible"

    def __init__(self, tol: float = SUPPORT_TOL, oracle_tol: float = 1e-9) -> None:
        super().__init__()
        self.tol = tol
        self.oracle_tol = oracle_tol


@run.register
def run_forcing(family: QutritCounterexample, check: ForcingCheck) -> CheckResult:
    params = family.params
    witness = positive_forcing_witness(family, params.t3, params.t4, check.tol)
    oracle = 2 * abs(np.cos(params.theta))
    if witness is None:
        return CheckResult(check.tag, INCONCLUSIVE, summary={"oracle": oracle})
    check.data["witness"] = witness
    summary = {
        "discrepancy": witness.discrepancy,
        "oracle": oracle,
        "origins": list(witness.origins),
        "overlap_with_3": float(abs(witness.shared_vector[2])),
    }
    if not witness.certifies(check.tol):
        status = INCONCLUSIVE
    else:
        status = status_of(abs(witness.discrepancy - oracle) <= check.oracle_tol)
    return CheckResult(check.tag, status, DataFrame([summary]), summary)


class ClosedFormCheck(QutritCheckAbs):
    """Closed forms of the last segment and the bound chain

    Four parts: the derivative is nonpositive on the lam x tau grid, the
    norm closed form matches full evaluation on seeded random points, the
    bound chain holds (theta <= pi/2 only) and the lam -> 1/lam reflection
    holds.

    :param seed: seed of the random points
    :param points: number of random points for the norm and the reflection
    """

    tag = "closed-form"

    def __init__(self, seed: int = 0, points: int = 50) -> None:
        super().__init__()
        self.seed = seed
        self.points = points


@run.register
def run_closed_form(family: QutritCounterexample, check: ClosedFormCheck) -> CheckResult:
    theta, delta = family.params.theta, family.params.delta
    rng = np.random.default_rng(check.seed)
    lam_grid, tau_grid = np.meshgrid(np.linspace(0, 10, 101), np.linspace(0, 1, 101))
    derivative = np.nanmax(gamma4_derivative_closed_form(lam_grid, tau_grid, theta, delta))

    lams, taus = rng.uniform(0, 10, check.points), rng.uniform(0, 1, check.points)
    norm_error = max(
        abs(
            gamma4_norm_closed_form(lam, tau, theta, delta)
            - gamma4_norm_numeric(lam, tau, theta, delta)
        )
        for lam, tau in zip(lams, taus)
    )

    if theta <= np.pi / 2:
        ledger = bound_chain_check(theta, np.linspace(0.005, 1, 200))
        chain_ok = bool(ledger["ok"].all())
    else:
        chain_ok = False
    angles = np.linspace(0, np.pi / 2, 50)
    monotone_ok = bool(lambda_monotonicity_check(angles, np.arange(1.0, 11.0))["ok"].all())
    reflection_ok = lambda_reflection_check(
        rng.uniform(0.01, 0.99, 1000), rng.uniform(0, 1, 1000), theta, delta
    )
    details = DataFrame(
        [
            {"part": "derivative", "value": float(derivative), "ok": derivative <= TOL_CLOSED},
            {"part": "norm", "value": float(norm_error), "ok": norm_error <= 1e-10},
            {"part": "bound-chain", "value": np.nan, "ok": chain_ok},
            {"part": "monotonicity", "value": np.nan, "ok": monotone_ok},
            {"part": "reflection", "value": np.nan, "ok": reflection_ok},
        ]
    )
    summary = {"max_derivative": float(derivative), "norm_error": float(norm_error)}
    return CheckResult(check.tag, status_of(bool(details["ok"].all())), details, summary)


class GammaOneOracleCheck(QutritCheckAbs):
    """Closed form of the first segment matches the dense exponential

    :param taus: local times in [0, 1)
    :param tol: largest accepted entrywise error
    """

    tag = "gamma1-oracle"

    def __init__(self, taus: Sequence[float] = tuple(np.arange(1, 10) / 10), tol: float = 1e-10):
        super().__init__()
        self.taus = tuple(taus)
        self.tol = tol


@run.register
def run_gamma_one(family: QutritCounterexample, check: GammaOneOracleCheck) -> CheckResult:
    rows = [
        {
            "tau": tau,
            "error": gamma_family(1, tau, family.params).max_abs_diff(
                gamma1_exponential(tau, family.params)
            ),
        }
        for tau in check.taus
    ]
    details = DataFrame(rows, columns=["tau", "error"])
    max_error = float(details["error"].max())
    summary = {"max_error": max_error}
    return CheckResult(check.tag, status_of(max_error <= check.tol), details, summary)


class ImageStructureCheck(QutritCheckAbs):
    """Image ranks along the family and the failing inclusion on [t3, t4]

    :param tol: relative singular-value cutoff
    :param min_residual: smallest residual accepted as a failed inclusion
    """

    tag = "image-structure"
    expected_ranks = (9, 3, 3, 2, 2, 2, 2)

    def __init__(self, tol: float = RANK_RTOL, min_residual: float = 0.01) -> None:
        super().__init__()
        self.tol = tol
        self.min_residual = min_residual


@run.register
def run_image_structure(family: QutritCounterexample, check: ImageStructureCheck) -> CheckResult:
    t1, t2, t3, t4 = family.params.times
    times = (t1 / 2, t1, (t1 + t2) / 2, t2, (t2 + t3) / 2, t3, t4)
    ranks = [family.at(t).rank(check.tol) for t in times]
    residuals = image_inclusion_residuals(family, np.linspace(t3, t4, 5), check.tol)
    nonincreasing = is_image_nonincreasing(family, np.linspace(t3, t4, 5), check.tol)
    details = DataFrame({"t": times, "rank": ranks, "expected": check.expected_ranks})
    summary = {
        "ranks": ranks,
        "image_nonincreasing_t3_t4": nonincreasing,
        "max_residual_t3_t4": float(residuals["residual"].max()),
    }
    ok = (
        tuple(ranks) == check.expected_ranks
        and not nonincreasing
        and summary["max_residual_t3_t4"] > check.min_residual
    )
    return CheckResult(check.tag, status_of(ok), details, summary)


@can_run.register
def can_run_counterexample(family: QutritCounterexample, check: QutritCheckAbs) -> bool:
    return True


@default_checks.register
def default_checks_counterexample(family: QutritCounterexample) -> List[CheckAbs]:
    checks = [
        DynamicalMapCheck(),
        ContinuityCheck(),
        EndpointCheck(),
        ForcingCheck(),
        ContractivityCheck(),
        ClosedFormCheck(),
        GammaOneOracleCheck(),
        ImageStructureCheck(),
    ]  # type: List[CheckAbs]
    if family.params.delta > 1:
        checks.append(SmoothnessCheck())
    return checks
