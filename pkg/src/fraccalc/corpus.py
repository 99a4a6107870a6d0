# this_file: src/fraccalc/corpus.py
"""Analytic corpus of test functions with exact evaluators.

Every corpus function is addressed by a spec string (``power:1.5``,
``heaviside:0.25``, ``cantor:12``, ``weierstrass:2:20``, ...) and knows how to
evaluate itself on an interval [a, b]. Where a closed form exists it also
exposes its exact Riemann-Liouville integral and derivative, which serve as
oracles for the grid operators.

Exact evaluators return ``nan`` at points where the closed form is singular.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fraccalc.errors import DomainError, SpecError
from fraccalc.special import gamma

FloatArray = npt.NDArray[np.float64]

DEFAULT_CANTOR_LEVEL = 12
DEFAULT_WEIERSTRASS_Q = 2.0
DEFAULT_WEIERSTRASS_TERMS = 20

# Orders closer than this to a pole of 1/Γ are treated as exact zeros.
_POLE_TOLERANCE = 1e-12


def _offsets(x: npt.ArrayLike, a: float) -> FloatArray:
    return np.asarray(x, dtype=np.float64) - a


def _power_of_offset(t: FloatArray, exponent: float, at_zero: float = np.nan) -> FloatArray:
    """Evaluate t**exponent for t > 0 and ``at_zero`` for t <= 0."""
    positive = t > 0.0
    safe = np.where(positive, t, 1.0)
    result = np.where(positive, np.power(safe, exponent), at_zero)
    if exponent > 0.0:
        result = np.where(positive, result, 0.0)
    elif exponent == 0.0:
        result = np.where(positive | (t == 0.0), 1.0, at_zero)
    return result


def _reciprocal_gamma(x: float) -> float:
    """1/Γ(x) for any real x, with the poles at 0, -1, -2, ... mapped to 0."""
    product = 1.0
    while x <= 0.0:
        if abs(x - round(x)) < _POLE_TOLERANCE:
            return 0.0
        # 1/Γ(x) = x / Γ(x + 1)
        product *= x
        x += 1.0
    return product / float(gamma(x))


def cantor_vitali_eval(level: int, x: npt.ArrayLike) -> FloatArray | float:
    """Evaluate the level-``level`` Cantor-Vitali staircase on [0, 1].

    ``c_0(x) = x`` and ``c_{m+1}`` is ½c_m(3x) on [0, ⅓], ½ on [⅓, ⅔] and
    ½ + ½c_m(3x − 2) on [⅔, 1].

    Raises:
        DomainError: If ``level < 1`` or any point lies outside [0, 1].
    """
    if level < 1:
        msg = f"Cantor-Vitali level must be >= 1, got {level}"
        raise DomainError(msg)
    points = np.asarray(x, dtype=np.float64)
    if np.any(points < 0.0) or np.any(points > 1.0) or not np.all(np.isfinite(points)):
        msg = "Cantor-Vitali function is defined on [0, 1] only"
        raise DomainError(msg)
    result = np.zeros_like(points)
    active = np.ones(points.shape, dtype=bool)
    weight = 1.0
    current = points.copy()
    for _ in range(level):
        left = current <= 1.0 / 3.0
        right = current >= 2.0 / 3.0
        middle = ~left & ~right
        result = np.where(active & (middle | right), result + 0.5 * weight, result)
        active &= ~middle
        current = np.clip(np.where(left, 3.0 * current, np.where(right, 3.0 * current - 2.0, current)), 0.0, 1.0)
        weight *= 0.5
    result = np.where(active, result + weight * current, result)
    if result.ndim == 0:
        return float(result)
    return result


def weierstrass_eval(q: float, terms: int, a: float, x: npt.ArrayLike) -> FloatArray | float:
    """Evaluate Σ_{n<terms} q^{-n} (cos(qⁿx) − cos(qⁿa)), the real Weierstrass series.

    Raises:
        DomainError: If ``q <= 1`` or ``terms < 1``.
    """
    if not q > 1.0:
        msg = f"Weierstrass base q must be > 1, got {q}"
        raise DomainError(msg)
    if terms < 1:
        msg = f"Weierstrass series needs at least one term, got {terms}"
        raise DomainError(msg)
    points = np.asarray(x, dtype=np.float64)
    frequencies = q ** np.arange(terms, dtype=np.float64)
    amplitudes = 1.0 / frequencies
    phases = np.multiply.outer(points, frequencies)
    result = (np.cos(phases) - np.cos(frequencies * a)) @ amplitudes
    if np.ndim(result) == 0:
        return float(result)
    return np.asarray(result, dtype=np.float64)


@dataclass(frozen=True)
class CorpusFunction(ABC):
    """A named function of [a, b] with an exact pointwise evaluator."""

    @property
    @abstractmethod
    def spec(self) -> str:
        """Spec string that parses back to this function."""

    @abstractmethod
    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:
        """Evaluate the function at ``x`` for the interval [a, b]."""

    def validate(self, a: float, b: float) -> None:  # noqa: ARG002
        """Check that the parameters are admissible on [a, b]."""
        return

    def jumps(self, a: float, b: float) -> list[tuple[float, float]]:  # noqa: ARG002
        """Jump locations and signed heights inside (a, b)."""
        return []

    def first_cell_mean(self, a: float, h: float) -> float | None:  # noqa: ARG002
        """Exact mean over [a, a+h] when the function is unbounded at a, else ``None``."""
        return None

    def derivative(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        """Classical derivative for C¹ kinds."""
        msg = f"{self.spec} is not a C1 function"
        raise DomainError(msg)

    def exact_rl_integral(  # noqa: ARG002
        self, x: npt.ArrayLike, order: float, a: float, b: float
    ) -> FloatArray | None:
        """Closed-form left RL integral of the given order, if known."""
        return None

    def exact_rl_derivative(self, x: npt.ArrayLike, s: float, a: float, b: float) -> FloatArray | None:  # noqa: ARG002
        """Closed-form left RL derivative of order ``s``, if known."""
        return None


@dataclass(frozen=True)
class Power(CorpusFunction):
    """(x − a)^k for k > −1; the value at a is 0 when k < 0."""

    k: float

    @property
    def spec(self) -> str:
        return f"power:{self.k:g}"

    def validate(self, a: float, b: float) -> None:  # noqa: ARG002
        if not (math.isfinite(self.k) and self.k > -1.0):
            msg = f"power exponent must be > -1, got {self.k}"
            raise DomainError(msg)

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return _power_of_offset(_offsets(x, a), self.k, at_zero=0.0)

    def first_cell_mean(self, a: float, h: float) -> float | None:  # noqa: ARG002
        if self.k >= 0.0:
            return None
        return h**self.k / (self.k + 1.0)

    def derivative(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:
        if self.k == 0.0:
            return np.zeros_like(_offsets(x, a))
        if self.k < 1.0:
            return super().derivative(x, a, b)
        return self.k * _power_of_offset(_offsets(x, a), self.k - 1.0, at_zero=0.0)

    def exact_rl_integral(self, x: npt.ArrayLike, order: float, a: float, b: float) -> FloatArray:  # noqa: ARG002
        coefficient = float(gamma(self.k + 1.0)) * _reciprocal_gamma(self.k + order + 1.0)
        return coefficient * _power_of_offset(_offsets(x, a), self.k + order)

    def exact_rl_derivative(self, x: npt.ArrayLike, s: float, a: float, b: float) -> FloatArray:  # noqa: ARG002
        """Γ(k+1)/Γ(k−s+1)·(x−a)^{k−s}, valid for every order s > 0."""
        coefficient = float(gamma(self.k + 1.0)) * _reciprocal_gamma(self.k - s + 1.0)
        t = _offsets(x, a)
        if coefficient == 0.0:
            return np.zeros_like(t)
        return coefficient * _power_of_offset(t, self.k - s)


@dataclass(frozen=True)
class Constant(CorpusFunction):
    """The constant function c."""

    c: float = 1.0

    @property
    def spec(self) -> str:
        return f"constant:{self.c:g}"

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return np.full_like(_offsets(x, a), self.c)

    def derivative(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return np.zeros_like(_offsets(x, a))

    def exact_rl_integral(self, x: npt.ArrayLike, order: float, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return self.c * _power_of_offset(_offsets(x, a), order) / float(gamma(order + 1.0))

    def exact_rl_derivative(self, x: npt.ArrayLike, s: float, a: float, b: float) -> FloatArray:  # noqa: ARG002
        t = _offsets(x, a)
        if self.c == 0.0:
            return np.zeros_like(t)
        return self.c * _power_of_offset(t, -s) / float(gamma(1.0 - s))


@dataclass(frozen=True)
class Heaviside(CorpusFunction):
    """The indicator χ_[α, b], right-continuous at α."""

    alpha: float

    @property
    def spec(self) -> str:
        return f"heaviside:{self.alpha:g}"

    def validate(self, a: float, b: float) -> None:
        if not a < self.alpha < b:
            msg = f"heaviside location {self.alpha} must lie inside ({a}, {b})"
            raise DomainError(msg)

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return (np.asarray(x, dtype=np.float64) >= self.alpha).astype(np.float64)

    def jumps(self, a: float, b: float) -> list[tuple[float, float]]:  # noqa: ARG002
        return [(self.alpha, 1.0)]

    def exact_rl_integral(self, x: npt.ArrayLike, order: float, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return _power_of_offset(_offsets(x, self.alpha), order) / float(gamma(order + 1.0))

    def exact_rl_derivative(self, x: npt.ArrayLike, s: float, a: float, b: float) -> FloatArray:  # noqa: ARG002
        t = _offsets(x, self.alpha)
        # Zero on [a, α]: the jump term only acts strictly to the right.
        return np.where(t > 0.0, _power_of_offset(t, -s), 0.0) / float(gamma(1.0 - s))


@dataclass(frozen=True)
class Polynomial(CorpusFunction):
    """Σ cᵢ (x − a)^i with coefficients in ascending order."""

    coefficients: tuple[float, ...]

    @property
    def spec(self) -> str:
        return "poly:" + ",".join(f"{c:.17g}" for c in self.coefficients)

    def validate(self, a: float, b: float) -> None:  # noqa: ARG002
        if not self.coefficients or not all(math.isfinite(c) for c in self.coefficients):
            msg = "polynomial needs at least one finite coefficient"
            raise DomainError(msg)

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return np.polynomial.polynomial.polyval(_offsets(x, a), self.coefficients)

    def derivative(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        slope = np.polynomial.polynomial.polyder(self.coefficients)
        return np.polynomial.polynomial.polyval(_offsets(x, a), slope)

    def exact_rl_integral(self, x: npt.ArrayLike, order: float, a: float, b: float) -> FloatArray:
        total = np.zeros_like(_offsets(x, a))
        for degree, c in enumerate(self.coefficients):
            if c != 0.0:
                total = total + c * Power(float(degree)).exact_rl_integral(x, order, a, b)
        return total

    def exact_rl_derivative(self, x: npt.ArrayLike, s: float, a: float, b: float) -> FloatArray:
        total = np.zeros_like(_offsets(x, a))
        for degree, c in enumerate(self.coefficients):
            if c != 0.0:
                term = Power(float(degree)).exact_rl_derivative(x, s, a, b)
                total = total + c * np.asarray(term)
        return total


@dataclass(frozen=True)
class Cosine(CorpusFunction):
    """cos(ω(x − a)), a smooth test function."""

    omega: float = 1.0

    @property
    def spec(self) -> str:
        return f"cos:{self.omega:g}"

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return np.cos(self.omega * _offsets(x, a))

    def derivative(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return -self.omega * np.sin(self.omega * _offsets(x, a))


@dataclass(frozen=True)
class CantorVitali(CorpusFunction):
    """Cantor-Vitali staircase rescaled to [a, b]; Hölder exponent ln 2 / ln 3."""

    level: int = DEFAULT_CANTOR_LEVEL

    @property
    def spec(self) -> str:
        return f"cantor:{self.level}"

    def validate(self, a: float, b: float) -> None:  # noqa: ARG002
        if self.level < 1:
            msg = f"Cantor-Vitali level must be >= 1, got {self.level}"
            raise DomainError(msg)

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:
        t = np.clip(_offsets(x, a) / (b - a), 0.0, 1.0)
        return np.asarray(cantor_vitali_eval(self.level, t), dtype=np.float64)


@dataclass(frozen=True)
class Weierstrass(CorpusFunction):
    """Real part of the truncated Weierstrass series anchored at a."""

    q: float = DEFAULT_WEIERSTRASS_Q
    terms: int = DEFAULT_WEIERSTRASS_TERMS

    @property
    def spec(self) -> str:
        return f"weierstrass:{self.q:g}:{self.terms}"

    def validate(self, a: float, b: float) -> None:  # noqa: ARG002
        if not self.q > 1.0 or self.terms < 1:
            msg = f"weierstrass needs q > 1 and terms >= 1, got q={self.q}, terms={self.terms}"
            raise DomainError(msg)

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:  # noqa: ARG002
        return np.asarray(weierstrass_eval(self.q, self.terms, a, x), dtype=np.float64)


@dataclass(frozen=True)
class LogReciprocal(CorpusFunction):
    """1 / ln(t/2) with t = (x − a)/(b − a); continuous, 0 at a, not Hölder."""

    @property
    def spec(self) -> str:
        return "log-reciprocal"

    def evaluate(self, x: npt.ArrayLike, a: float, b: float) -> FloatArray:
        t = _offsets(x, a) / (b - a)
        positive = t > 0.0
        return np.where(positive, 1.0 / np.log(np.where(positive, t, 1.0) / 2.0), 0.0)


def _parse_floats(parts: list[str], spec: str) -> list[float]:
    try:
        return [float(part) for part in parts]
    except ValueError as e:
        msg = f"bad numeric parameter in function spec '{spec}'"
        raise SpecError(msg) from e


def parse_function_spec(spec: str) -> CorpusFunction:
    """Parse a corpus spec string such as ``power:1.5`` or ``weierstrass:2:20``.

    Raises:
        SpecError: If the kind is unknown or its parameters are malformed.
    """
    name, _, rest = spec.strip().partition(":")
    params = [p for p in rest.split(":") if p] if rest else []
    kind = name.lower()
    match kind:
        case "power" | "pow":
            if len(params) != 1:
                msg = f"power needs one exponent, e.g. 'power:1.5', got '{spec}'"
                raise SpecError(msg)
            return Power(_parse_floats(params, spec)[0])
        case "constant" | "const":
            values = _parse_floats(params, spec)
            return Constant(values[0] if values else 1.0)
        case "heaviside" | "step":
            if len(params) != 1:
                msg = f"heaviside needs one location, e.g. 'heaviside:0.25', got '{spec}'"
                raise SpecError(msg)
            return Heaviside(_parse_floats(params, spec)[0])
        case "poly" | "polynomial":
            if len(params) != 1:
                msg = f"poly needs comma-separated coefficients, e.g. 'poly:1,0,1', got '{spec}'"
                raise SpecError(msg)
            return Polynomial(tuple(_parse_floats(params[0].split(","), spec)))
        case "cos" | "cosine":
            values = _parse_floats(params, spec)
            return Cosine(values[0] if values else 1.0)
        case "cantor":
            values = _parse_floats(params, spec)
            level = int(values[0]) if values else DEFAULT_CANTOR_LEVEL
            if values and values[0] != level:
                msg = f"cantor level must be an integer, got '{spec}'"
                raise SpecError(msg)
            return CantorVitali(level)
        case "weierstrass":
            values = _parse_floats(params, spec)
            q = values[0] if values else DEFAULT_WEIERSTRASS_Q
            terms = int(values[1]) if len(values) > 1 else DEFAULT_WEIERSTRASS_TERMS
            return Weierstrass(q, terms)
        case "log-reciprocal" | "logrecip":
            return LogReciprocal()
        case _:
            msg = f"unknown function kind '{name}' in spec '{spec}'"
            raise SpecError(msg)
