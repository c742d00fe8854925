"""Right-derivative scans of trace norms along a family

For every probe X and grid point t the scan estimates the right derivative
of t -> ||(Lambda_t (x) id_k)(X)||_1. Monotone contractivity of the family
on the probes means every derivative is at most the slack.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
from pandas import DataFrame, concat

from ..constants import DEFAULT_H0, TOL_DERIV
from ..counterexample.constants import CONSTANTS
from ..family import DynamicalMapAbs
from ..operators import STATE_DIFFERENCE, ProbeSet, right_derivative, trace_norms
from ..superop import apply

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
EXPLORATORY = "exploratory, no claim for k > 1"
COLUMNS = ["t", "probe_id", "k", "norm", "rderiv", "verdict"]


@dataclass(frozen=True)
class LambdaProbe:
    """Probe rhoA - lam rhoB of the qutrit construction

    Negative lam gives positive operators, whose norm equals the trace
    1 - lam and stays constant under trace-preserving positive maps.
    """

    lam: float

    @property
    def operator(self) -> np.ndarray:
        return CONSTANTS.rhoA - self.lam * CONSTANTS.rhoB

    @property
    def trace(self) -> float:
        return 1 - self.lam


def lambda_probes(lambdas: Iterable[float]) -> ProbeSet:
    """ProbeSet of the operators rhoA - lam rhoB, in the given order"""
    return ProbeSet([LambdaProbe(float(lam)).operator for lam in lambdas], 0, STATE_DIFFERENCE)


@dataclass(frozen=True, eq=False)
class ScanReport:
    """Result of a right-derivative scan

    :param rows: DataFrame with columns t, probe_id, k, norm, rderiv, verdict
        sorted by probe_id and t
    :param summary: extrema and overall verdict
    :param metadata: parameters of the scan
    """

    rows: DataFrame = field(repr=False)
    summary: Dict[str, Any]
    metadata: Dict[str, Any]

    @property
    def passed(self) -> bool:
        return bool(self.summary["passed"])

    @property
    def max_rderiv(self) -> float:
        return float(self.summary["max_rderiv"])


def _check_grid(family: DynamicalMapAbs, grid: Sequence[float], h0: float) -> List[float]:
    grid = family.times(grid)
    if len(grid) == 0:
        raise ValueError("Scan grid is empty")
    if grid[-1] + h0 > family.t_max:
        raise ValueError(
            f"Grid point {grid[-1]} leaves no room for step {h0} before {family.t_max}"
        )
    return grid


def _scan_chunk(
    family: DynamicalMapAbs, probes: ProbeSet, times: Sequence[float], k: int, h0: float
) -> DataFrame:
    def norms(t: float) -> np.ndarray:
        return trace_norms(apply(family.at(t).ampliate(k), probes))

    frames = []
    for t in times:
        frames.append(
            DataFrame(
                {
                    "t": t,
                    "probe_id": np.arange(len(probes)),
                    "k": k,
                    "norm": norms(t),
                    "rderiv": right_derivative(norms, t, h0),
                }
            )
        )
    return concat(frames, ignore_index=True)


def norm_derivative_scan(
    family: DynamicalMapAbs,
    probes: ProbeSet,
    grid: Sequence[float],
    k: int = 1,
    slack: float = TOL_DERIV,
    h0: float = DEFAULT_H0,
    workers: int = 1,
) -> ScanReport:
    """Scan right derivatives of trace norms of evolved probes

    For k > 1 the probes live on the product of the system with a
    k-dimensional ancilla and Lambda_t (x) id_k is applied. The grid is split
    among worker threads and the rows are merged by (probe_id, t), so the
    result does not depend on the number of workers.

    :param family: the family
    :param probes: probes of dimension family.dim * k
    :param grid: ascending times with t + h0 <= t_max
    :param k: ancilla dimension
    :param slack: largest derivative accepted as nonpositive
    :param h0: largest step of the right-derivative estimate
    :param workers: number of threads
    :raises ValueError: on invalid k, grid or probe dimension
    :return: the report
    """
    if k < 1:
        raise ValueError(f"Ancilla dimension {k} should be positive")
    if probes.dim != family.dim * k:
        raise ValueError(f"Probes of dim {probes.dim} do not match {family.dim} x {k}")
    grid = _check_grid(family, grid, h0)
    logger.info("Scanning %d probes on %d grid points with k = %d", len(probes), len(grid), k)

    workers = max(1, min(workers, len(grid)))
    if workers == 1:
        rows = _scan_chunk(family, probes, grid, k, h0)
    else:
        chunks = [list(c) for c in np.array_split(np.asarray(grid), workers)]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(lambda c: _scan_chunk(family, probes, c, k, h0), chunks))
        rows = concat(parts, ignore_index=True)
    rows = rows.sort_values(["probe_id", "t"], kind="mergesort").reset_index(drop=True)
    rows["verdict"] = np.where(rows["rderiv"] > slack, FAIL, PASS)
    rows = rows[COLUMNS]

    worst = int(rows["rderiv"].idxmax())
    summary = {
        "max_rderiv": float(rows.at[worst, "rderiv"]),
        "argmax_t": float(rows.at[worst, "t"]),
        "argmax_probe": int(rows.at[worst, "probe_id"]),
        "failures": int((rows["verdict"] == FAIL).sum()),
        "slack": slack,
        "passed": bool((rows["verdict"] == PASS).all()),
    }
    metadata = {
        "seed": probes.seed,
        "probe_kind": probes.kind,
        "probes": len(probes),
        "grid_size": len(grid),
        "grid_min": grid[0],
        "grid_max": grid[-1],
        "k": k,
        "h0": h0,
    }
    params = getattr(family, "params", None)
    if params is not None:
        metadata["theta"] = params.theta
        metadata["delta"] = params.delta
    if k > 1:
        metadata["label"] = EXPLORATORY
    if summary["passed"]:
        logger.info("Scan passed, max right derivative %.3e", summary["max_rderiv"])
    else:
        logger.warning(
            "Scan found %d positive derivatives, max %.3e at t = %s",
            summary["failures"],
            summary["max_rderiv"],
            summary["argmax_t"],
        )
    return ScanReport(rows, summary, metadata)


def scan_grid(family: DynamicalMapAbs, size: int, h0: float = DEFAULT_H0) -> np.ndarray:
    """Uniform grid of size points on [0, t_max) leaving room for the step h0"""
    if size < 1:
        raise ValueError(f"Grid size {size} should be positive")
    grid = np.linspace(0, family.t_max, size, endpoint=False)
    return grid[grid + h0 <= family.t_max]
