"""Parameters of the qutrit construction

Rate functions are sympy expressions in the variable ``s`` on [0, 1). The
default choice is the pole family gamma(s) = 1/(1-s) for the generator rate
and f(s) = s^2/(1-s) for both mixing exponents. Custom expressions are
validated against the rate constraints before use.

Parameters may be stored in a plain-text file with one ``key = value`` pair
per line and ``#`` comments::

    theta = 1.5
    t1 = 1
    t2 = 2
    t3 = 3
    t4 = 4
    delta = 1
    rate = custom
    gamma = 2/(1 - s)
    f1 = s/(1 - s)
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Mapping, Tuple, Union

import numpy as np
import sympy
from pandas import DataFrame
from scipy.integrate import quad

from ..constants import DEFAULT_DELTA, DEFAULT_THETA, DEFAULT_TIMES

logger = logging.getLogger(__name__)

DEFAULT_POLE = "default-pole"
CUSTOM = "custom"
RATE_KINDS = (DEFAULT_POLE, CUSTOM)

S = sympy.Symbol("s", real=True)

_VALIDATION_GRID = np.linspace(0, 0.99, 100)
_PARAM_KEYS = ("theta", "t1", "t2", "t3", "t4", "delta", "rate", "gamma", "f1", "f2")


class RateFunction:
    """Real function of s in [0, 1) given by a sympy expression

    :param expr: expression in the variable s, sympy or string
    :param kind: "default-pole" for the built-in choices, otherwise "custom"
    """

    def __init__(self, expr: Union[str, sympy.Expr], kind: str = CUSTOM) -> None:
        if kind not in RATE_KINDS:
            raise ValueError(f"Unknown rate kind {kind}")
        if isinstance(expr, str):
            expr = sympy.sympify(expr, locals={"s": S})
        unknown = expr.free_symbols - {S}
        if unknown:
            raise ValueError(f"Rate expression {expr} depends on unknown symbols {unknown}")
        self.expr = expr
        self.kind = kind
        self._fun = sympy.lambdify(S, expr, "numpy")
        self._limit = None  # type: Union[None, float]
        self._antiderivative = None

    @classmethod
    def default_gamma(cls) -> RateFunction:
        """gamma(s) = 1/(1-s)"""
        return cls(1 / (1 - S), DEFAULT_POLE)

    @classmethod
    def default_exponent(cls) -> RateFunction:
        """f(s) = s^2/(1-s)"""
        return cls(S**2 / (1 - S), DEFAULT_POLE)

    def __repr__(self) -> str:
        return f"RateFunction({self.expr}, kind={self.kind})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, RateFunction):
            return False
        return self.kind == other.kind and self.expr == other.expr

    def __hash__(self) -> int:
        return hash((self.kind, str(self.expr)))

    def limit_at_one(self) -> float:
        """Left limit of the function at s = 1, possibly inf"""
        if self._limit is None:
            self._limit = float(sympy.limit(self.expr, S, 1, "-"))
        return self._limit

    def __call__(self, s: float) -> float:
        if s < 0 or s > 1:
            raise ValueError(f"Argument {s} outside [0, 1]")
        if s >= 1:
            return self.limit_at_one()
        return float(self._fun(s))

    def decay(self, s: float) -> float:
        """Return exp(-f(s)), equal to 0 at s = 1 for divergent f"""
        return float(np.exp(-self(s)))

    def integral(self, tau: float) -> float:
        """Integral of the function over [0, tau]

        The default pole has the closed form -ln(1-tau). Custom expressions
        are integrated symbolically, with numerical quadrature as fallback.

        :param tau: upper limit in [0, 1]
        :raises ValueError: if tau is outside [0, 1]
        :return: the integral, inf for divergent integrals at tau = 1
        """
        if tau < 0 or tau > 1:
            raise ValueError(f"Upper limit {tau} outside [0, 1]")
        if self.kind == DEFAULT_POLE and self.expr == 1 / (1 - S):
            return np.inf if tau >= 1 else float(-np.log1p(-tau))
        if tau >= 1:
            return float(sympy.integrate(self.expr, (S, 0, 1)))
        antiderivative = self._get_antiderivative()
        if antiderivative is not None:
            return float(np.real(antiderivative(tau)))
        value, _ = quad(self._fun, 0, tau)
        return float(value)

    def _get_antiderivative(self):
        if self._antiderivative is None:
            upper = sympy.Symbol("u", positive=True)
            primitive = sympy.integrate(self.expr, (S, 0, upper), conds="none")
            self._antiderivative = False
            if not primitive.has(sympy.Integral):
                candidate = sympy.lambdify(upper, primitive, "numpy")
                # branch choices of log may make the primitive invalid on (0, 1)
                with np.errstate(all="ignore"):
                    probe = complex(candidate(0.5))
                reference, _ = quad(self._fun, 0, 0.5)
                if np.isfinite(probe) and abs(probe - reference) < 1e-8:
                    self._antiderivative = candidate
            if not self._antiderivative:
                logger.debug("No usable symbolic integral of %s, using quadrature", self.expr)
        return self._antiderivative or None

    def validate_exponent(self, grid: Iterable[float] = None) -> None:
        """Check f(0) = 0, f strictly increasing on [0, 1) and f -> inf at 1

        :param grid: points of [0, 1) on which monotonicity is checked
        :raises ValueError: if any condition is violated
        """
        grid = _VALIDATION_GRID if grid is None else np.asarray(list(grid), dtype=float)
        if abs(self(0.0)) > 1e-12:
            raise ValueError(f"Exponent {self.expr} does not vanish at 0")
        values = np.array([self(s) for s in grid])
        if not np.all(np.diff(values) > 0):
            raise ValueError(f"Exponent {self.expr} is not strictly increasing")
        if not np.isposinf(self.limit_at_one()):
            raise ValueError(f"Exponent {self.expr} does not diverge at 1")

    def validate_rate(self, grid: Iterable[float] = None) -> None:
        """Check gamma > 0 on [0, 1) and divergence of its integral at 1

        :param grid: points of [0, 1) on which positivity is checked
        :raises ValueError: if any condition is violated
        """
        grid = _VALIDATION_GRID if grid is None else np.asarray(list(grid), dtype=float)
        values = np.array([self(s) for s in grid])
        if not np.all(np.isfinite(values)) or not np.all(values > 0):
            raise ValueError(f"Rate {self.expr} is not positive and bounded on the grid")
        if not np.isposinf(self.integral(1.0)):
            raise ValueError(f"Rate {self.expr} has a convergent integral on [0, 1]")

    def tabulate(self, grid: Iterable[float]) -> DataFrame:
        """Values of the function on a grid as DataFrame with columns s, value"""
        grid = list(grid)
        return DataFrame({"s": grid, "value": [self(s) for s in grid]})


@dataclass(frozen=True)
class MapParams:
    """Parameters of the piecewise qutrit family

    :param theta: rotation angle in (0, pi)
    :param t1: end of the first segment
    :param t2: end of the second segment
    :param t3: end of the third segment
    :param t4: end of the last segment
    :param gamma_rate: rate of the generator on the first segment
    :param f1: mixing exponent of the second segment
    :param f2: mixing exponent of the third segment
    :param delta: exponent of tau inside the rotation of the last segment
    """

    theta: float = DEFAULT_THETA
    t1: float = DEFAULT_TIMES[0]
    t2: float = DEFAULT_TIMES[1]
    t3: float = DEFAULT_TIMES[2]
    t4: float = DEFAULT_TIMES[3]
    gamma_rate: RateFunction = field(default_factory=RateFunction.default_gamma)
    f1: RateFunction = field(default_factory=RateFunction.default_exponent)
    f2: RateFunction = field(default_factory=RateFunction.default_exponent)
    delta: float = DEFAULT_DELTA

    def __post_init__(self) -> None:
        if not 0 < self.theta < np.pi:
            raise ValueError(f"theta = {self.theta} outside (0, pi)")
        if not 0 < self.t1 < self.t2 < self.t3 < self.t4:
            raise ValueError(f"Times {self.times} are not ascending and positive")
        if self.delta < 1:
            raise ValueError(f"delta = {self.delta} should be at least 1")
        if self.gamma_rate.kind == CUSTOM:
            self.gamma_rate.validate_rate()
        for exponent in (self.f1, self.f2):
            if exponent.kind == CUSTOM:
                exponent.validate_exponent()

    @property
    def times(self) -> Tuple[float, float, float, float]:
        return (self.t1, self.t2, self.t3, self.t4)

    @property
    def rate(self) -> str:
        kinds = {r.kind for r in (self.gamma_rate, self.f1, self.f2)}
        return CUSTOM if CUSTOM in kinds else DEFAULT_POLE

    @property
    def in_contractive_window(self) -> bool:
        """Flag stating if sqrt(2) <= theta <= pi/2"""
        return np.sqrt(2) <= self.theta <= np.pi / 2

    def segment(self, t: float) -> Tuple[int, float]:
        """Return segment index 1..4 and local time tau in [0, 1] of t

        :param t: time in [0, t4]
        :raises ValueError: if t is out of range
        :return: pair (index, tau)
        """
        if t < 0 or t > self.t4:
            raise ValueError(f"Time {t} outside [0, {self.t4}]")
        starts = (0.0,) + self.times
        for index in range(1, 4):
            if t < starts[index]:
                break
        else:
            index = 4
        begin, end = starts[index - 1], starts[index]
        return index, min((t - begin) / (end - begin), 1.0)

    def to_dict(self) -> Dict[str, Union[float, str]]:
        """Plain representation used in reports"""
        return {
            "theta": self.theta,
            "t1": self.t1,
            "t2": self.t2,
            "t3": self.t3,
            "t4": self.t4,
            "delta": self.delta,
            "rate": self.rate,
            "gamma": str(self.gamma_rate.expr),
            "f1": str(self.f1.expr),
            "f2": str(self.f2.expr),
        }

    @classmethod
    def from_dict(cls, values: Mapping[str, Union[str, float]]) -> MapParams:
        """Build parameters from a (possibly partial) key-value mapping

        :param values: mapping with keys theta, t1..t4, delta, rate, gamma, f1, f2
        :raises ValueError: on unknown keys or rate kinds
        :return: the parameters
        """
        unknown = set(values) - set(_PARAM_KEYS)
        if unknown:
            raise ValueError(f"Unknown parameter keys {sorted(unknown)}")
        numeric = ("theta", "t1", "t2", "t3", "t4", "delta")
        kwargs = {k: float(values[k]) for k in numeric if k in values}  # type: Dict[str, Any]
        rate = values.get("rate", DEFAULT_POLE)
        if rate == CUSTOM:
            if "gamma" in values:
                kwargs["gamma_rate"] = RateFunction(str(values["gamma"]))
            for key in ("f1", "f2"):
                if key in values:
                    kwargs[key] = RateFunction(str(values[key]))
        elif rate != DEFAULT_POLE:
            raise ValueError(f"Unknown rate kind {rate}")
        elif any(k in values for k in ("gamma", "f1", "f2")):
            raise ValueError("Rate expressions require rate = custom")
        return cls(**kwargs)


def parse_config(text: str) -> Dict[str, str]:
    """Parse key = value lines, ignoring blank lines and # comments

    :param text: content of the configuration
    :raises ValueError: on lines without "=" or on unknown keys
    :return: mapping of keys to raw values
    """
    values = {}  # type: Dict[str, str]
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"Line {number} is not of the form key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARAM_KEYS:
            raise ValueError(f"Unknown parameter key {key} in line {number}")
        values[key] = value
    return values


def load_params(path: str, overrides: Mapping[str, Union[str, float]] = None) -> MapParams:
    """Load MapParams from a key-value file

    :param path: path of the file
    :param overrides: values taking precedence over the file
    :return: the parameters
    """
    with open(path) as config_file:
        values = dict(parse_config(config_file.read()))  # type: Dict[str, Union[str, float]]
    if overrides:
        values.update(overrides)
    logger.info("Loaded parameters %s from %s", values, path)
    return MapParams.from_dict(values)
