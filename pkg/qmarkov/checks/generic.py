"""Checks meaningful for every family"""
import logging
from typing import List

import numpy as np
from pandas import DataFrame

from ..constants import DEFAULT_SEED, TOL_DERIV, TOL_PSD, TOL_TP
from ..contractivity.scan import norm_derivative_scan, scan_grid
from ..family import DynamicalMapAbs
from ..operators import RANDOM_HERMITIAN, random_probes
from ..superop import SuperOp, apply
from .check import CheckAbs, CheckResult, can_run, default_checks, run, status_of

logger = logging.getLogger(__name__)


class DynamicalMapCheck(CheckAbs):
    """Complete positivity and trace preservation on a uniform grid

    Lambda_0 has to be the identity, every Lambda_t on the grid over
    [0, t_max] has to have Choi matrix with smallest eigenvalue >= -tol_psd
    and change the trace of each probe by at most tol_tp.

    :param grid_size: number of grid points, endpoints included
    :param probes: number of random Hermitian probes
    :param seed: seed of the probes
    """

    tag = "dynamical-map"

    def __init__(
        self,
        grid_size: int = 200,
        probes: int = 50,
        seed: int = DEFAULT_SEED,
        tol_psd: float = TOL_PSD,
        tol_tp: float = TOL_TP,
    ) -> None:
        super().__init__()
        self.grid_size = grid_size
        self.probes = probes
        self.seed = seed
        self.tol_psd = tol_psd
        self.tol_tp = tol_tp


@run.register
def run_dynamical_map(family: DynamicalMapAbs, check: DynamicalMapCheck) -> CheckResult:
    probes = random_probes(family.dim, check.probes, check.seed)
    traces = np.trace(probes.as_array(), axis1=1, axis2=2)
    rows = []
    for t in np.linspace(0, family.t_max, check.grid_size):
        S = family.at(t)
        images = apply(S, probes)
        rows.append(
            {
                "t": t,
                "min_choi": S.to_choi().min_eigenvalue(),
                "tp_error": float(np.max(np.abs(np.trace(images, axis1=1, axis2=2) - traces))),
            }
        )
    details = DataFrame(rows, columns=["t", "min_choi", "tp_error"])
    identity_error = family.at(0.0).max_abs_diff(SuperOp.identity(family.dim))
    summary = {
        "min_choi": float(details["min_choi"].min()),
        "max_tp_error": float(details["tp_error"].max()),
        "identity_error": identity_error,
    }
    ok = (
        summary["min_choi"] >= -check.tol_psd
        and summary["max_tp_error"] <= check.tol_tp
        and identity_error <= 1e-12
    )
    return CheckResult(check.tag, status_of(ok), details, summary)


@can_run.register
def can_run_dynamical_map(family: DynamicalMapAbs, check: DynamicalMapCheck) -> bool:
    return check.grid_size >= 2


class ContractivityCheck(CheckAbs):
    """Right derivatives of trace norms of random probes are nonpositive

    For k > 1 the probes live on the system extended by a k-dimensional
    ancilla. Such scans are exploratory and labelled accordingly.

    :param grid_size: number of grid points on [0, t_max)
    :param probes: number of probes
    :param seed: seed of the probes
    :param k: ancilla dimension
    :param slack: largest derivative accepted as nonpositive
    :param workers: number of scanning threads
    :param kind: kind of the random probes
    """

    tag = "contractivity"

    def __init__(
        self,
        grid_size: int = 200,
        probes: int = 500,
        seed: int = DEFAULT_SEED,
        k: int = 1,
        slack: float = TOL_DERIV,
        workers: int = 1,
        kind: str = RANDOM_HERMITIAN,
    ) -> None:
        super().__init__()
        self.grid_size = grid_size
        self.probes = probes
        self.seed = seed
        self.k = k
        self.slack = slack
        self.workers = workers
        self.kind = kind


@run.register
def run_contractivity(family: DynamicalMapAbs, check: ContractivityCheck) -> CheckResult:
    probes = random_probes(family.dim * check.k, check.probes, check.seed, check.kind)
    report = norm_derivative_scan(
        family,
        probes,
        scan_grid(family, check.grid_size),
        k=check.k,
        slack=check.slack,
        workers=check.workers,
    )
    check.data["report"] = report
    summary = dict(report.summary)
    summary.update(report.metadata)
    return CheckResult(check.tag, status_of(report.passed), report.rows, summary)


@can_run.register
def can_run_contractivity(family: DynamicalMapAbs, check: ContractivityCheck) -> bool:
    return check.k >= 1


@default_checks.register
def default_checks_generic(family: DynamicalMapAbs) -> List[CheckAbs]:
    return [DynamicalMapCheck(), ContractivityCheck()]
