"""Closed forms for the last segment of the qutrit construction

On the image of E3 E2 E1 every operator is a multiple of rhoA - lam rhoB.
For lam >= 0 the trace norm of its image under the last-segment map at
local time tau is::

    N = 1/2 [(1 - tau^2)|lam - 1| + (1 + tau^2) R],
    R = sqrt(1 + lam^2 + 2 lam cos(2 theta tau^delta))

and its tau-derivative::

    dN = tau (R - |lam - 1|) - lam theta delta tau^(delta-1) (1 + tau^2) sin(2 theta tau^delta) / R

The derivative is singular where R vanishes, i.e. lam = 1 and
2 theta tau^delta = pi. For delta = 1 it is nonpositive for all lam >= 0 and
tau in [0, 1] exactly when sqrt(2) <= theta <= pi/2.
"""
import logging
from typing import Iterable, List, Union

import numpy as np
import sympy
from pandas import DataFrame

from ..constants import DEFAULT_DELTA, SINGULAR_TOL, TOL_CLOSED
from ..counterexample.maps import gamma_family
from ..counterexample.params import MapParams
from ..operators import trace_norm
from ..superop import apply
from .scan import LambdaProbe

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_lam, _tau, _theta, _delta = sympy.symbols("lam tau theta delta", positive=True)
_angle = 2 * _theta * _tau**_delta
_root = sympy.sqrt(1 + _lam**2 + 2 * _lam * sympy.cos(_angle))
NORM_EXPR = sympy.Rational(1, 2) * (
    (1 - _tau**2) * sympy.Abs(_lam - 1) + (1 + _tau**2) * _root
)
DERIVATIVE_EXPR = _tau * (_root - sympy.Abs(_lam - 1)) - _lam * _theta * _delta * _tau ** (
    _delta - 1
) * (1 + _tau**2) * sympy.sin(_angle) / _root

_norm = sympy.lambdify((_lam, _tau, _theta, _delta), NORM_EXPR, "numpy")
_derivative = sympy.lambdify((_lam, _tau, _theta, _delta), DERIVATIVE_EXPR, "numpy")
_symbolic_derivative = sympy.lambdify(
    (_lam, _tau, _theta, _delta), sympy.diff(NORM_EXPR, _tau), "numpy"
)


def _as_output(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def _check_domain(lam: ArrayLike, tau: ArrayLike) -> None:
    if np.any(np.asarray(lam) < 0):
        raise ValueError("Closed forms require lam >= 0")
    tau = np.asarray(tau)
    if np.any(tau < 0) or np.any(tau > 1):
        raise ValueError("Closed forms require tau in [0, 1]")


def _root_value(lam: ArrayLike, tau: ArrayLike, theta: ArrayLike, delta: float) -> np.ndarray:
    angle = 2 * np.asarray(theta) * np.asarray(tau, dtype=float) ** delta
    return np.sqrt(np.maximum(1 + np.asarray(lam) ** 2 + 2 * np.asarray(lam) * np.cos(angle), 0))


def is_singular(lam: ArrayLike, tau: ArrayLike, theta: ArrayLike, delta: float = DEFAULT_DELTA):
    """Flag points where the derivative has a vanishing denominator"""
    return _root_value(lam, tau, theta, delta) <= SINGULAR_TOL


def gamma4_norm_closed_form(
    lam: ArrayLike, tau: ArrayLike, theta: ArrayLike, delta: float = DEFAULT_DELTA
) -> ArrayLike:
    """Trace norm of the last-segment image of rhoA - lam rhoB

    Arguments broadcast as numpy arrays.

    :param lam: lam >= 0
    :param tau: local time in [0, 1]
    :param theta: rotation angle
    :param delta: exponent of tau inside the rotation
    :raises ValueError: if lam < 0 or tau is outside [0, 1]
    :return: the norm
    """
    _check_domain(lam, tau)
    return _as_output(np.asarray(_norm(lam, tau, theta, delta), dtype=float))


def gamma4_derivative_closed_form(
    lam: ArrayLike, tau: ArrayLike, theta: ArrayLike, delta: float = DEFAULT_DELTA
) -> ArrayLike:
    """tau-derivative of gamma4_norm_closed_form

    Singular points (vanishing square root) evaluate to nan and are logged.

    :param lam: lam >= 0
    :param tau: local time in [0, 1]
    :param theta: rotation angle
    :param delta: exponent of tau inside the rotation
    :raises ValueError: if lam < 0 or tau is outside [0, 1]
    :return: the derivative, nan at singular points
    """
    _check_domain(lam, tau)
    singular = is_singular(lam, tau, theta, delta)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.asarray(_derivative(lam, tau, theta, delta), dtype=float)
    value = np.where(singular, np.nan, value)
    if np.any(singular):
        logger.warning("%d singular points of the derivative skipped", int(np.sum(singular)))
    return _as_output(value)


def gamma4_derivative_symbolic(
    lam: ArrayLike, tau: ArrayLike, theta: ArrayLike, delta: float = DEFAULT_DELTA
) -> ArrayLike:
    """Derivative obtained by symbolic differentiation of the norm

    Independent of gamma4_derivative_closed_form; valid for tau > 0 away from
    singular points and from lam = 1.
    """
    _check_domain(lam, tau)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _as_output(np.asarray(_symbolic_derivative(lam, tau, theta, delta), dtype=float))


def gamma4_norm_numeric(
    lam: float, tau: float, theta: float, delta: float = DEFAULT_DELTA
) -> float:
    """Trace norm of the last-segment image of rhoA - lam rhoB by full evaluation"""
    params = MapParams(theta=theta, delta=delta)
    return trace_norm(apply(gamma_family(4, tau, params), LambdaProbe(lam).operator))


def theta_window_sweep(
    thetas: Iterable[float],
    taus: Iterable[float],
    lambdas: Iterable[float],
    delta: float = DEFAULT_DELTA,
    tol: float = TOL_CLOSED,
) -> DataFrame:
    """Locate positive values of the closed-form derivative for each theta

    :param thetas: angles in (0, pi)
    :param taus: local times in [0, 1]
    :param lambdas: values lam >= 0
    :param delta: exponent of tau inside the rotation
    :param tol: values above tol count as positive
    :return: DataFrame with columns theta, max_value, argmax_lambda,
        argmax_tau, positive, first_positive_tau, positive_at_one, singular
    """
    taus = np.asarray(list(taus), dtype=float)
    lambdas = np.asarray(list(lambdas), dtype=float)
    lam_grid, tau_grid = np.meshgrid(lambdas, taus, indexing="ij")
    rows = []
    for theta in thetas:
        values = np.asarray(gamma4_derivative_closed_form(lam_grid, tau_grid, theta, delta))
        singular = int(np.sum(np.isnan(values)))
        i, j = np.unravel_index(np.nanargmax(values), values.shape)
        positive_taus = taus[np.any(values > tol, axis=0)]
        first_positive = float(np.min(positive_taus)) if len(positive_taus) else np.nan
        at_one = values[:, taus == 1.0]
        at_one = at_one[np.isfinite(at_one)]
        rows.append(
            {
                "theta": float(theta),
                "max_value": float(values[i, j]),
                "argmax_lambda": float(lambdas[i]),
                "argmax_tau": float(taus[j]),
                "positive": bool(values[i, j] > tol),
                "first_positive_tau": first_positive,
                "positive_at_one": bool(at_one.size and np.max(at_one) > tol),
                "singular": singular,
            }
        )
    return DataFrame(rows)


def polynomial_majorant(theta: float, tau: ArrayLike) -> ArrayLike:
    """(2 - theta^2) tau - (theta^2 - theta^4/3) tau^3"""
    tau = np.asarray(tau, dtype=float)
    return _as_output((2 - theta**2) * tau - (theta**2 - theta**4 / 3) * tau**3)


def polynomial_majorant_roots(theta: float) -> List[float]:
    """Real roots of the cubic majorant in tau, sorted"""
    t = sympy.Symbol("t")
    theta = sympy.nsimplify(theta)
    poly = sympy.Poly((2 - theta**2) * t - (theta**2 - theta**4 / 3) * t**3, t)
    roots = {
        float(sympy.re(r))
        for r in sympy.roots(poly, multiple=True)
        if abs(complex(r).imag) < 1e-12
    }
    return sorted(roots)


def bound_chain_check(theta: float, taus: Iterable[float], tol: float = TOL_CLOSED) -> DataFrame:
    """Evaluate the chain of upper bounds of the derivative for lam >= 1

    Columns of the ledger, each bounded by the next one:

    * sup_lambda: the derivative maximized over lam in 1..10,
    * bound: tau sqrt(2 + 2 cos 2 theta tau) - (1 + tau^2) theta/2 sin 2 theta tau,
    * factored: cos(theta tau) [2 tau - (1 + tau^2) theta sin(theta tau)],
      equal to bound for theta <= pi/2,
    * bracket: the term in square brackets of factored,
    * taylor: the bracket with sine replaced by its third order expansion,
    * polynomial: the cubic majorant.

    The chain proves nonpositivity when polynomial <= 0.

    :param theta: angle in [0, pi/2]
    :param taus: local times in (0, 1]
    :param tol: slack of each inequality
    :raises ValueError: if theta is outside [0, pi/2]
    :return: DataFrame with the columns above, argmax_lambda and ok
    """
    if not 0 <= theta <= np.pi / 2:
        raise ValueError(f"theta = {theta} outside [0, pi/2]")
    taus = np.asarray(list(taus), dtype=float)
    lambdas = np.arange(1.0, 11.0)
    lam_grid, tau_grid = np.meshgrid(lambdas, taus, indexing="ij")
    values = np.asarray(gamma4_derivative_closed_form(lam_grid, tau_grid, theta))
    angle = theta * taus
    ledger = DataFrame(
        {
            "tau": taus,
            "sup_lambda": np.nanmax(values, axis=0),
            "argmax_lambda": lambdas[np.nanargmax(values, axis=0)],
            "bound": taus * np.sqrt(2 + 2 * np.cos(2 * angle))
            - (1 + taus**2) * theta / 2 * np.sin(2 * angle),
            "bracket": 2 * taus - (1 + taus**2) * theta * np.sin(angle),
            "taylor": (2 - theta**2) * taus
            - (theta**2 - theta**4 / 6) * taus**3
            + theta**4 * taus**5 / 6,
            "polynomial": polynomial_majorant(theta, taus),
        }
    )
    ledger.insert(4, "factored", np.cos(angle) * ledger["bracket"])
    ledger["ok"] = (
        (ledger["sup_lambda"] <= ledger["bound"] + tol)
        & ((ledger["bound"] - ledger["factored"]).abs() <= tol)
        & (ledger["bracket"] <= ledger["taylor"] + tol)
        & (ledger["taylor"] <= ledger["polynomial"] + tol)
        & (ledger["polynomial"] <= tol)
    )
    return ledger


def lambda_monotonicity_check(
    angles: Iterable[float], lambdas: Iterable[float], tol: float = TOL_CLOSED
) -> DataFrame:
    """Check the lam-derivative of the square bracket and the ratio bound

    For lam >= 1 and an angle a = theta tau, the lam-derivative of
    1 - lam + sqrt(1 + lam^2 + 2 lam cos 2a) is nonpositive and
    lam / sqrt(1 + lam^2 + 2 lam cos 2a) >= lam / (1 + lam) >= 1/2.

    :param angles: values of theta tau
    :param lambdas: values lam >= 1
    :param tol: slack
    :return: DataFrame with columns angle, lam, slope, ratio, ok
    """
    lam_grid, angle_grid = np.meshgrid(
        np.asarray(list(lambdas), dtype=float), np.asarray(list(angles), dtype=float), indexing="ij"
    )
    if np.any(lam_grid < 1):
        raise ValueError("Monotonicity check requires lam >= 1")
    c = np.cos(2 * angle_grid)
    root = np.sqrt(1 + lam_grid**2 + 2 * lam_grid * c)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = -1 + (lam_grid + c) / root
        ratio = lam_grid / root
    table = DataFrame(
        {
            "angle": angle_grid.ravel(),
            "lam": lam_grid.ravel(),
            "slope": slope.ravel(),
            "ratio": ratio.ravel(),
        }
    )
    table = table[np.isfinite(table["slope"])].reset_index(drop=True)
    table["ok"] = (table["slope"] <= tol) & (table["ratio"] >= 0.5 - tol)
    return table


def lambda_reflection_check(
    lam: ArrayLike,
    tau: ArrayLike,
    theta: ArrayLike,
    delta: float = DEFAULT_DELTA,
    tol: float = 1e-10,
) -> bool:
    """Check dN(lam) = lam dN(1/lam) for 0 < lam < 1

    Singular points are skipped.

    :raises ValueError: if some lam is outside (0, 1)
    :return: flag stating if the identity holds everywhere within tol
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam <= 0) or np.any(lam >= 1):
        raise ValueError("Reflection check requires 0 < lam < 1")
    left = np.asarray(gamma4_derivative_closed_form(lam, tau, theta, delta))
    right = lam * np.asarray(gamma4_derivative_closed_form(1 / lam, tau, theta, delta))
    finite = np.isfinite(left) & np.isfinite(right)
    return bool(np.all(np.abs(left - right)[finite] <= tol))
