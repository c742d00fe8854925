"""Intermediate maps and divisibility verdicts

For s < t the intermediate map V with Lambda_t = V Lambda_s is computed as
Lambda_t pinv(Lambda_s). V is unique only on the image of Lambda_s; outside
of it the minimum-norm completion of the pseudoinverse is used. Verdicts
which do not depend on the completion are produced by the forcing witness.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pandas import DataFrame
from scipy.linalg import null_space

from .constants import PURITY_TOL, RANK_RTOL, SUPPORT_TOL, TOL_PSD
from .family import DynamicalMapAbs
from .operators import trace_norm
from .superop import SuperOp, apply, matrix_unit

logger = logging.getLogger(__name__)

EXACT = "exact"
IMAGE_RESTRICTED = "image-restricted"
INCONSISTENT = "inconsistent"

CP = "CP"
NOT_CP = "not-CP"
UNDEFINED = "undefined-off-image"


@dataclass(frozen=True, eq=False)
class IntermediateMap:
    """Map V with V Lambda_s = Lambda_t

    :param s: earlier time
    :param t: later time
    :param map: the map V
    :param residual: largest absolute entry of V Lambda_s - Lambda_t
    :param definedness: one of "exact", "image-restricted", "inconsistent"
    :param rank: rank of Lambda_s
    """

    s: float
    t: float
    map: SuperOp = field(repr=False)
    residual: float
    definedness: str
    rank: int


def intermediate_map(
    family: DynamicalMapAbs, s: float, t: float, tol: float = RANK_RTOL
) -> IntermediateMap:
    """Construct Lambda_(t,s) = Lambda_t pinv(Lambda_s)

    The map is "exact" if Lambda_s is invertible, "image-restricted" if it is
    not but V Lambda_s reproduces Lambda_t within tol, and "inconsistent"
    otherwise (the image of Lambda_t is not reachable from Lambda_s).

    :param family: the family
    :param s: earlier time
    :param t: later time
    :param tol: relative singular-value cutoff and residual tolerance
    :raises ValueError: if s >= t or the times are out of range
    :return: the intermediate map
    """
    if s >= t:
        raise ValueError(f"Intermediate map requires s < t, got s = {s}, t = {t}")
    family.times([s, t])
    before = family.at(s).matrix
    after = family.at(t).matrix
    singular = np.linalg.svd(before, compute_uv=False)
    rank = int(np.sum(singular > tol * singular[0])) if singular[0] > 0 else 0
    V = after @ np.linalg.pinv(before, rcond=tol)
    residual = float(np.max(np.abs(V @ before - after)))
    if rank == before.shape[0]:
        definedness = EXACT
    elif residual < tol:
        definedness = IMAGE_RESTRICTED
    else:
        definedness = INCONSISTENT
    return IntermediateMap(s, t, SuperOp(V), residual, definedness, rank)


def cp_divisibility_scan(
    family: DynamicalMapAbs, grid: Sequence[float], tol: float = RANK_RTOL
) -> DataFrame:
    """CP verdicts of intermediate maps between consecutive grid points

    The verdict is "undefined-off-image" for inconsistent intermediate maps,
    otherwise "CP" or "not-CP" depending on the smallest Choi eigenvalue of V
    (compared with -TOL_PSD). For image-restricted maps the verdict refers to
    the minimum-norm completion.

    :param family: the family
    :param grid: ascending times
    :param tol: tolerance passed to intermediate_map
    :return: DataFrame with columns s, t, definedness, rank, residual,
        min_choi, tp, verdict
    """
    grid = family.times(grid)
    rows = []
    for s, t in zip(grid, grid[1:]):
        inter = intermediate_map(family, s, t, tol)
        choi = inter.map.to_choi()
        min_choi = choi.min_eigenvalue()
        if inter.definedness == INCONSISTENT:
            verdict = UNDEFINED
        elif min_choi >= -TOL_PSD:
            verdict = CP
        else:
            verdict = NOT_CP
        rows.append(
            {
                "s": s,
                "t": t,
                "definedness": inter.definedness,
                "rank": inter.rank,
                "residual": inter.residual,
                "min_choi": min_choi,
                "tp": choi.is_tp(),
                "verdict": verdict,
            }
        )
    report = DataFrame(
        rows, columns=["s", "t", "definedness", "rank", "residual", "min_choi", "tp", "verdict"]
    )
    logger.info("CP-divisibility verdicts: %s", report["verdict"].value_counts().to_dict())
    return report


@dataclass(frozen=True, eq=False)
class ForcingWitness:
    """Pure state whose image under any positive TP intermediate map is forced twice

    :param shared_vector: unit vector in the supports of both sources
    :param forced_targets: the two pure images the vector is forced onto
    :param discrepancy: trace-norm distance of the forced targets
    :param sources: the two source states in the image of Lambda_s
    :param origins: labels of the sources, "|k><k|" for evolved basis
        projectors and "boundary" for extreme states of the image
    """

    shared_vector: np.ndarray = field(repr=False)
    forced_targets: Tuple[np.ndarray, np.ndarray] = field(repr=False)
    discrepancy: float
    sources: Tuple[np.ndarray, np.ndarray] = field(repr=False)
    origins: Tuple[str, str]

    def certifies(self, tol: float = SUPPORT_TOL) -> bool:
        """Flag stating if the witness excludes positive TP intermediate maps"""
        return self.discrepancy > tol


def _support_projector(rho: np.ndarray, tol: float) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    support = eigvecs[:, eigvals > tol]
    return support @ support.conj().T


def _hermitize(X: np.ndarray) -> np.ndarray:
    return (X + X.conj().T) / 2


def _hermitian_span(operators: Sequence[np.ndarray], tol: float) -> List[np.ndarray]:
    """Orthonormal basis of the real span of Hermitian operators"""
    if not operators:
        return []
    d = operators[0].shape[0]
    columns = np.array([np.concatenate([X.real.ravel(), X.imag.ravel()]) for X in operators]).T
    U, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s[0] <= tol:
        return []
    rank = int(np.sum(s > tol * s[0]))
    return [
        U[: d * d, j].reshape(d, d) + 1j * U[d * d :, j].reshape(d, d) for j in range(rank)
    ]


def hermitian_basis(dim: int) -> List[np.ndarray]:
    """Orthonormal basis of dim x dim Hermitian operators over the reals"""
    basis = [matrix_unit(k, k, dim) for k in range(dim)]
    for j, k in combinations(range(dim), 2):
        unit = matrix_unit(j, k, dim)
        basis.append((unit + unit.T) / np.sqrt(2))
        basis.append(1j * (unit - unit.T) / np.sqrt(2))
    return basis


def image_boundary_states(S: SuperOp, tol: float = SUPPORT_TOL) -> List[np.ndarray]:
    """Extreme states of the image of S along a basis of traceless directions

    Starting from the normalized image of the maximally mixed state, every
    traceless Hermitian direction D of Im(S) is followed both ways until the
    smallest eigenvalue reaches zero. If the states of the image form a
    segment (rank two image) both of its ends are found. Directions leaving
    the support of the starting state are skipped.

    :param S: Hermiticity preserving map
    :param tol: eigenvalue cutoff
    :return: states on the boundary of the image, each of unit trace
    """
    d = S.dim
    center = _hermitize(apply(S, np.eye(d) / d))
    weight = np.trace(center).real
    if weight <= tol:
        return []
    center = center / weight
    images = [_hermitize(apply(S, B)) for B in hermitian_basis(d)]
    image = _hermitian_span(images, tol)
    directions = _hermitian_span([H - np.trace(H) * center for H in image], tol)

    eigvals, eigvecs = np.linalg.eigh(center)
    support = eigvecs[:, eigvals > tol]
    scale = 1 / np.sqrt(eigvals[eigvals > tol])
    projector = support @ support.conj().T
    states = []
    for D in directions:
        if np.max(np.abs(D - projector @ D @ projector)) > tol:
            continue
        whitened = scale[:, None] * (support.conj().T @ D @ support) * scale[None, :]
        spectrum = np.linalg.eigvalsh(_hermitize(whitened))
        for extreme in (spectrum[0], spectrum[-1]):
            if abs(extreme) > tol:
                state = _hermitize(center - D / extreme)
                states.append(state / np.trace(state).real)
    return states


def _forcing_candidates(
    family: DynamicalMapAbs, s: float, t: float, tol: float
) -> List[Tuple[str, np.ndarray, np.ndarray]]:
    """Sources in Im(Lambda_s) with pure targets, as (origin, source, target)"""
    before, after = family.at(s), family.at(t)
    d = family.dim
    pairs = []  # type: List[Tuple[str, np.ndarray, np.ndarray]]
    for k in range(d):
        unit = matrix_unit(k, k, d)
        pairs.append((f"|{k + 1}><{k + 1}|", apply(before, unit), apply(after, unit)))
    inter = intermediate_map(family, s, t)
    if inter.definedness != INCONSISTENT:
        for sigma in image_boundary_states(before, tol):
            pairs.append(("boundary", sigma, apply(inter.map, sigma)))

    candidates = []
    for origin, sigma, pi in pairs:
        sigma, pi = _hermitize(sigma), _hermitize(pi)
        weight_s, weight_t = np.trace(sigma).real, np.trace(pi).real
        if weight_s <= tol or weight_t <= tol:
            continue
        sigma, pi = sigma / weight_s, pi / weight_t
        if np.trace(pi @ pi).real > 1 - PURITY_TOL:
            candidates.append((origin, sigma, pi))
    return candidates


def positive_forcing_witness(
    family: DynamicalMapAbs, s: float, t: float, tol: float = SUPPORT_TOL
) -> Optional[ForcingWitness]:
    """Search a pure-target forcing configuration between s and t

    Sources are states sigma in the image of Lambda_s, taken as evolved
    basis projectors Lambda_s(|k><k|) and as the boundary states of the
    image. Their targets are Lambda_t(|k><k|) and V(sigma) for the
    intermediate map V, which is unique on the image. If a target pi is
    pure, a positive trace-preserving V with V(sigma) = pi has to map every
    pure state in the support of sigma onto pi. A vector in the supports of
    two sources is therefore forced onto two targets; if they differ, no
    such V exists. Supports are intersected as the kernel of the sum of the
    complementary projectors.

    :param family: the family
    :param s: earlier time
    :param t: later time
    :param tol: eigenvalue cutoff for supports and traces
    :raises ValueError: if s >= t or the times are out of range
    :return: the witness with the largest discrepancy, or None if no pair of
        sources with pure targets shares a vector
    """
    if s >= t:
        raise ValueError(f"Forcing witness requires s < t, got s = {s}, t = {t}")
    family.times([s, t])
    candidates = _forcing_candidates(family, s, t, tol)

    best = None  # type: Optional[ForcingWitness]
    identity = np.eye(family.dim)
    for (origin1, sigma1, pi1), (origin2, sigma2, pi2) in combinations(candidates, 2):
        P1, P2 = _support_projector(sigma1, tol), _support_projector(sigma2, tol)
        shared = null_space(2 * identity - P1 - P2, rcond=tol)
        if shared.shape[1] == 0:
            continue
        discrepancy = trace_norm(_hermitize(pi1 - pi2))
        if best is None or discrepancy > best.discrepancy:
            best = ForcingWitness(
                shared[:, 0], (pi1, pi2), discrepancy, (sigma1, sigma2), (origin1, origin2)
            )
    if best is None:
        logger.info("No forcing configuration between s = %s and t = %s", s, t)
    else:
        logger.info("Forcing witness between s = %s and t = %s: %s", s, t, best)
    return best
