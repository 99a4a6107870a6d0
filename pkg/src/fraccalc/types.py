# this_file: src/fraccalc/types.py
"""Parameter and result types shared by the operators, norms and limits."""

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from fraccalc.errors import DomainError
from fraccalc.funcspace import Grid, Jump, SbvFunction, merge_jumps

FloatArray = npt.NDArray[np.float64]


class Side(enum.Enum):
    """Side of a fractional operator."""

    #: Integrates over [a, x].
    LEFT = "left"
    #: Integrates over [x, b].
    RIGHT = "right"

    @classmethod
    def parse(cls, value: "str | Side") -> "Side":
        if isinstance(value, Side):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as e:
            msg = f"side must be 'left' or 'right', got '{value}'"
            raise DomainError(msg) from e

    def flipped(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class FracParams:
    """Order ``s`` ∈ (0, 1) and side of a fractional operator."""

    s: float
    side: Side = Side.LEFT

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s) and 0.0 < self.s < 1.0):
            msg = f"fractional order must lie in (0, 1), got {self.s}"
            raise DomainError(msg)
        object.__setattr__(self, "side", Side.parse(self.side))


@dataclass(frozen=True)
class PowerTerm:
    """``c·(x − x₀)^e`` to the right of a left anchor, or ``c·(x₀ − x)^e`` left of a right anchor.

    The term vanishes on the other side of its anchor. At the anchor itself it
    contributes nothing, except an exponent-0 left term, which is a
    right-continuous step.
    """

    anchor: float
    coefficient: float
    exponent: float
    side: Side = Side.LEFT

    def distance(self, x: npt.ArrayLike) -> FloatArray:
        points = np.asarray(x, dtype=np.float64)
        return points - self.anchor if self.side is Side.LEFT else self.anchor - points

    def __call__(self, x: npt.ArrayLike) -> FloatArray:
        t = self.distance(x)
        positive = t > 0.0
        values = np.where(positive, self.coefficient * np.power(np.where(positive, t, 1.0), self.exponent), 0.0)
        if self.exponent == 0.0 and self.side is Side.LEFT:
            values = np.where(t == 0.0, self.coefficient, values)
        return values

    @property
    def is_singular(self) -> bool:
        return self.exponent < 0.0

    def reflected(self, grid: Grid) -> "PowerTerm":
        return PowerTerm(grid.reflect_point(self.anchor), self.coefficient, self.exponent, self.side.flipped())

    def scaled(self, factor: float) -> "PowerTerm":
        return PowerTerm(self.anchor, factor * self.coefficient, self.exponent, self.side)


def _merge_terms(terms: list[PowerTerm]) -> tuple[PowerTerm, ...]:
    totals: dict[tuple[float, float, Side], float] = {}
    for term in terms:
        key = (term.anchor, term.exponent, term.side)
        totals[key] = totals.get(key, 0.0) + term.coefficient
    return tuple(
        PowerTerm(anchor, c, exponent, side) for (anchor, exponent, side), c in totals.items() if c != 0.0
    )


@dataclass(frozen=True, eq=False)
class OperatorResult:
    """Output of a fractional operator on a grid.

    The value at any point is the piecewise-linear interpolant of ``regular``
    plus the closed-form ``singular_terms``. Node values of a singular term at
    its own anchor are left out, which is what ``singular_at_a`` and
    ``singular_at_b`` flag.
    """

    grid: Grid
    regular: FloatArray
    singular_terms: tuple[PowerTerm, ...] = ()
    singular_at_a: bool = False
    singular_at_b: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        regular = np.array(self.regular, dtype=np.float64)
        if regular.shape != (self.grid.n + 1,):
            msg = f"regular part must have {self.grid.n + 1} entries, got shape {regular.shape}"
            raise DomainError(msg)
        if not np.all(np.isfinite(regular)):
            msg = f"operator result {self.label!r} has non-finite node values"
            raise DomainError(msg)
        regular.setflags(write=False)
        object.__setattr__(self, "regular", regular)
        object.__setattr__(self, "singular_terms", tuple(self.singular_terms))

    @classmethod
    def zeros(cls, grid: Grid, label: str = "") -> "OperatorResult":
        return cls(grid, np.zeros(grid.n + 1), label=label)

    @property
    def nodes(self) -> FloatArray:
        return self.grid.nodes

    @property
    def values(self) -> FloatArray:
        """Finite node values; singular anchors carry only the regular part."""
        return self.regular + self.terms_at(self.grid.nodes)

    def terms_at(self, x: npt.ArrayLike) -> FloatArray:
        points = np.asarray(x, dtype=np.float64)
        total = np.zeros_like(points)
        for term in self.singular_terms:
            total = total + term(points)
        return total

    def __call__(self, x: npt.ArrayLike) -> FloatArray:
        points = np.asarray(x, dtype=np.float64)
        return np.interp(points, self.grid.nodes, self.regular) + self.terms_at(points)

    def node_mask(self) -> npt.NDArray[np.bool_]:
        """Nodes whose value is a genuine function value (not a singular anchor)."""
        mask = np.ones(self.grid.n + 1, dtype=bool)
        if self.singular_at_a:
            mask[0] = False
        if self.singular_at_b:
            mask[-1] = False
        return mask

    def _check_same_grid(self, other: "OperatorResult") -> None:
        if other.grid != self.grid:
            msg = f"results live on different grids: {self.grid} vs {other.grid}"
            raise DomainError(msg)

    def __add__(self, other: "OperatorResult") -> "OperatorResult":
        if not isinstance(other, OperatorResult):
            return NotImplemented
        self._check_same_grid(other)
        terms = _merge_terms([*self.singular_terms, *other.singular_terms])
        return OperatorResult(
            self.grid,
            self.regular + other.regular,
            terms,
            singular_at_a=self.singular_at_a or other.singular_at_a,
            singular_at_b=self.singular_at_b or other.singular_at_b,
        )

    def __mul__(self, factor: float) -> "OperatorResult":
        if not isinstance(factor, int | float):
            return NotImplemented
        c = float(factor)
        terms = _merge_terms([t.scaled(c) for t in self.singular_terms])
        return OperatorResult(
            self.grid,
            c * self.regular,
            terms,
            singular_at_a=self.singular_at_a and c != 0.0,
            singular_at_b=self.singular_at_b and c != 0.0,
            label=self.label,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorResult":
        return self * -1.0

    def __sub__(self, other: "OperatorResult") -> "OperatorResult":
        if not isinstance(other, OperatorResult):
            return NotImplemented
        return self + (-other)

    def reflect(self) -> "OperatorResult":
        """Mirror under t ↦ a + b − t."""
        return OperatorResult(
            self.grid,
            self.regular[::-1],
            tuple(t.reflected(self.grid) for t in self.singular_terms),
            singular_at_a=self.singular_at_b,
            singular_at_b=self.singular_at_a,
            label=self.label,
        )

    def to_sbv(self) -> SbvFunction:
        """Re-sample as an SbvFunction so the result can be fed to another operator.

        Exponent-0 terms become jumps (or base value); positive powers are
        sampled at the nodes.

        Raises:
            DomainError: If the result holds an unbounded singular term.
        """
        a, b = self.grid.a, self.grid.b
        values = self.regular.copy()
        base_shift = 0.0
        jumps: list[tuple[float, float]] = []
        for term in self.singular_terms:
            if term.exponent < 0.0:
                msg = f"cannot sample unbounded term with exponent {term.exponent} at {term.anchor}"
                raise DomainError(msg)
            if term.exponent > 0.0:
                values += term(self.grid.nodes)
                continue
            if term.side is Side.LEFT:
                if term.anchor <= a:
                    base_shift += term.coefficient
                elif term.anchor < b:
                    jumps.append((term.anchor, term.coefficient))
            elif term.anchor >= b:
                base_shift += term.coefficient
            elif term.anchor > a:
                base_shift += term.coefficient
                jumps.append((term.anchor, -term.coefficient))
        sbv = SbvFunction.from_values(self.grid, values)
        merged: tuple[Jump, ...] = merge_jumps(jumps)
        return SbvFunction(self.grid, sbv.ac_values, merged, sbv.base_value + base_shift)


class NormKind(enum.Enum):
    LP = "lp"
    TV = "tv"
    SBV = "sbv"
    GAGLIARDO = "gagliardo"
    HOLDER = "holder_exponent"


@dataclass(frozen=True)
class NormValue:
    """A non-negative functional value and what it measures."""

    value: float
    kind: NormKind
    p: float | None = None
    s: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.value) or self.value < 0.0:
            msg = f"{self.kind.value} value must be finite and >= 0, got {self.value}"
            raise DomainError(msg)

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class SweepPoint:
    parameter: float
    value: float


@dataclass(frozen=True)
class SweepReport:
    """Functional values along a monotone sequence of ``s`` or ``eps`` values.

    ``converged`` is ``None`` when no limit is asserted for the input.
    ``secondary`` holds an optional second functional with its own target.
    """

    parameter_name: str
    points: tuple[SweepPoint, ...]
    target: float | None = None
    converged: bool | None = None
    tolerance: float | None = None
    functional: str = ""
    secondary: tuple[SweepPoint, ...] = ()
    secondary_target: float | None = None
    secondary_functional: str = ""
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.parameter_name not in ("s", "eps"):
            msg = f"sweep parameter must be 's' or 'eps', got '{self.parameter_name}'"
            raise DomainError(msg)
        params = [p.parameter for p in self.points]
        steps = np.diff(params)
        if len(params) > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
            msg = f"sweep parameters must be strictly monotone, got {params}"
            raise DomainError(msg)
        if not all(math.isfinite(p.value) for p in (*self.points, *self.secondary)):
            msg = "sweep values must be finite"
            raise DomainError(msg)

    @property
    def last(self) -> SweepPoint:
        return self.points[-1]

    @property
    def parameters(self) -> list[float]:
        return [p.parameter for p in self.points]

    @property
    def values(self) -> list[float]:
        return [p.value for p in self.points]


@dataclass(frozen=True)
class MeasureTestResult:
    """∫ D^s u · φ against its limit ∫ u′φ + u(a⁺)φ(a) + Σ p_k φ(x_k)."""

    test_function: str
    computed_pairing: float
    analytic_limit: float
    s_used: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.computed_pairing) and math.isfinite(self.analytic_limit)):
            msg = f"pairing against {self.test_function} is not finite"
            raise DomainError(msg)

    @property
    def error(self) -> float:
        return abs(self.computed_pairing - self.analytic_limit)
