# this_file: src/fraccalc/funcspace.py
"""Function representations on [a, b]: uniform grids and SBV decompositions.

An :class:`SbvFunction` is stored as ``base_value + AC part + jumps``. The
absolutely continuous part is piecewise linear between grid nodes and pinned
to 0 at ``a``; jumps are kept symbolically and are right-continuous.
"""

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
from loguru import logger

from fraccalc.corpus import CorpusFunction
from fraccalc.errors import DomainError, SpecError

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Grid:
    """Uniform partition of [a, b] into ``n`` cells."""

    a: float = 0.0
    b: float = 1.0
    n: int = 4096

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            msg = f"grid needs finite a < b, got [{self.a}, {self.b}]"
            raise DomainError(msg)
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            msg = f"grid needs an integer n >= 2, got {self.n}"
            raise DomainError(msg)
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @cached_property
    def nodes(self) -> FloatArray:
        nodes = self.a + self.h * np.arange(self.n + 1, dtype=np.float64)
        nodes[-1] = self.b
        nodes.setflags(write=False)
        return nodes

    def cell_of(self, x: npt.ArrayLike) -> npt.NDArray[np.intp]:
        """Index of the cell [x_i, x_{i+1}) holding each point, clipped to the last cell."""
        idx = np.floor((np.asarray(x, dtype=np.float64) - self.a) / self.h).astype(np.intp)
        return np.clip(idx, 0, self.n - 1)

    def reflect_point(self, x: float) -> float:
        """Mirror a point under t ↦ a + b − t."""
        return self.a + self.b - x

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.a, self.b, self.n * factor)


@dataclass(frozen=True, order=True)
class Jump:
    """A jump of signed height ``height`` at ``location`` (χ_[location, b] convention)."""

    location: float
    height: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.location) and math.isfinite(self.height)):
            msg = f"jump must be finite, got ({self.location}, {self.height})"
            raise DomainError(msg)
        if self.height == 0.0:
            msg = f"jump at {self.location} has zero height"
            raise DomainError(msg)


def merge_jumps(jumps: list[tuple[float, float]]) -> tuple[Jump, ...]:
    """Combine jumps sharing a location and drop cancelled ones."""
    totals: dict[float, float] = {}
    for location, height in jumps:
        totals[location] = totals.get(location, 0.0) + height
    return tuple(Jump(x, p) for x, p in sorted(totals.items()) if p != 0.0)


@dataclass(frozen=True, eq=False)
class SbvFunction:
    """``base_value`` + piecewise-linear AC part + Σ p_k χ_[x_k, b].

    Attributes:
        grid: Grid the AC samples live on.
        ac_values: AC part at the ``n + 1`` nodes; ``ac_values[0]`` is 0.
        jumps: Jumps strictly inside (a, b), sorted by location.
        base_value: Right limit u(a⁺).
    """

    grid: Grid
    ac_values: FloatArray
    jumps: tuple[Jump, ...] = field(default=())
    base_value: float = 0.0

    def __post_init__(self) -> None:
        ac = np.array(self.ac_values, dtype=np.float64)
        if ac.shape != (self.grid.n + 1,):
            msg = f"ac_values must have {self.grid.n + 1} entries, got shape {ac.shape}"
            raise DomainError(msg)
        if not np.all(np.isfinite(ac)):
            msg = "ac_values must be finite"
            raise DomainError(msg)
        if ac[0] != 0.0:
            msg = f"AC part must vanish at a, got ac_values[0] = {ac[0]}"
            raise DomainError(msg)
        if not math.isfinite(self.base_value):
            msg = f"base_value must be finite, got {self.base_value}"
            raise DomainError(msg)
        jumps = tuple(j if isinstance(j, Jump) else Jump(*j) for j in self.jumps)
        for jump in jumps:
            if not self.grid.a < jump.location < self.grid.b:
                msg = f"jump at {jump.location} lies outside ({self.grid.a}, {self.grid.b})"
                raise DomainError(msg)
        locations = [j.location for j in jumps]
        if any(x1 >= x2 for x1, x2 in zip(locations, locations[1:], strict=False)):
            msg = "jump locations must be strictly increasing"
            raise DomainError(msg)
        ac.setflags(write=False)
        object.__setattr__(self, "ac_values", ac)
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "base_value", float(self.base_value))

    @classmethod
    def from_values(cls, grid: Grid, values: npt.ArrayLike, jumps: tuple[Jump, ...] = ()) -> "SbvFunction":
        """Build from continuous node values; ``values[0]`` becomes the base value."""
        arr = np.asarray(values, dtype=np.float64)
        if arr.shape != (grid.n + 1,):
            msg = f"expected {grid.n + 1} node values, got shape {arr.shape}"
            raise DomainError(msg)
        return cls(grid, arr - arr[0], tuple(jumps), float(arr[0]))

    @classmethod
    def zero(cls, grid: Grid) -> "SbvFunction":
        return cls(grid, np.zeros(grid.n + 1))

    @property
    def slopes(self) -> FloatArray:
        """Piecewise-constant derivative of the AC part, one value per cell."""
        return np.diff(self.ac_values) / self.grid.h

    @property
    def continuous_values(self) -> FloatArray:
        """base_value + AC part at the nodes."""
        return self.ac_values + self.base_value

    @property
    def has_jumps(self) -> bool:
        return bool(self.jumps)

    @property
    def total_jump(self) -> float:
        return sum(j.height for j in self.jumps)

    def jump_part(self, x: npt.ArrayLike) -> FloatArray:
        """Σ p_k for x_k ≤ x."""
        points = np.asarray(x, dtype=np.float64)
        total = np.zeros_like(points)
        for jump in self.jumps:
            total = total + np.where(points >= jump.location, jump.height, 0.0)
        return total

    @property
    def node_values(self) -> FloatArray:
        """Right-continuous values at the grid nodes."""
        return self.continuous_values + self.jump_part(self.grid.nodes)

    def __call__(self, x: npt.ArrayLike) -> FloatArray:
        points = np.asarray(x, dtype=np.float64)
        if np.any(points < self.grid.a) or np.any(points > self.grid.b):
            msg = f"evaluation point outside [{self.grid.a}, {self.grid.b}]"
            raise DomainError(msg)
        ac = np.interp(points, self.grid.nodes, self.ac_values)
        return ac + self.base_value + self.jump_part(points)

    def reflect(self) -> "SbvFunction":
        """Return v(t) = u(a + b − t), kept right-continuous."""
        ac = self.ac_values[::-1] - self.ac_values[-1]
        base = self.base_value + self.total_jump + float(self.ac_values[-1])
        jumps = tuple(Jump(self.grid.reflect_point(j.location), -j.height) for j in reversed(self.jumps))
        return SbvFunction(self.grid, ac, jumps, base)

    def _check_same_grid(self, other: "SbvFunction") -> None:
        if other.grid != self.grid:
            msg = f"functions live on different grids: {self.grid} vs {other.grid}"
            raise DomainError(msg)

    def __add__(self, other: "SbvFunction") -> "SbvFunction":
        if not isinstance(other, SbvFunction):
            return NotImplemented
        self._check_same_grid(other)
        jumps = merge_jumps([(j.location, j.height) for j in (*self.jumps, *other.jumps)])
        return SbvFunction(self.grid, self.ac_values + other.ac_values, jumps, self.base_value + other.base_value)

    def __mul__(self, factor: float) -> "SbvFunction":
        if not isinstance(factor, int | float):
            return NotImplemented
        c = float(factor)
        jumps = merge_jumps([(j.location, c * j.height) for j in self.jumps])
        return SbvFunction(self.grid, c * self.ac_values, jumps, c * self.base_value)

    __rmul__ = __mul__

    def __neg__(self) -> "SbvFunction":
        return self * -1.0

    def __sub__(self, other: "SbvFunction") -> "SbvFunction":
        if not isinstance(other, SbvFunction):
            return NotImplemented
        return self + (-other)

    def __repr__(self) -> str:
        return (
            f"SbvFunction(grid={self.grid}, base_value={self.base_value:g}, "
            f"jumps={[(j.location, j.height) for j in self.jumps]})"
        )


def sample(f: CorpusFunction, grid: Grid) -> SbvFunction:
    """Sample a corpus function into its SBV decomposition on ``grid``.

    Jumps reported by the corpus kind are stored symbolically and removed from
    the node samples. For kinds unbounded at ``a`` the node-0 value is chosen so
    the first linear cell carries the exact mass over [a, a + h].

    Raises:
        DomainError: If a corpus parameter is outside its admissible range.
    """
    f.validate(grid.a, grid.b)
    nodes = grid.nodes
    jumps = tuple(Jump(x, p) for x, p in f.jumps(grid.a, grid.b))
    values = np.array(f.evaluate(nodes, grid.a, grid.b), dtype=np.float64)
    for jump in jumps:
        values -= np.where(nodes >= jump.location, jump.height, 0.0)
    first_mean = f.first_cell_mean(grid.a, grid.h)
    if first_mean is not None:
        values[0] = 2.0 * first_mean - values[1]
    if not np.all(np.isfinite(values)):
        msg = f"{f.spec} is not finite on the nodes of [{grid.a}, {grid.b}]"
        raise DomainError(msg)
    logger.debug("sampled {} on {} nodes with {} jump(s)", f.spec, grid.n + 1, len(jumps))
    return SbvFunction(grid, values - values[0], jumps, float(values[0]))


def sbv_to_json(u: SbvFunction) -> dict[str, Any]:
    """Serialize to ``{a, b, n, ac_values, jumps: [{x, p}], base_value}``."""
    return {
        "a": u.grid.a,
        "b": u.grid.b,
        "n": u.grid.n,
        "ac_values": [float(v) for v in u.ac_values],
        "jumps": [{"x": j.location, "p": j.height} for j in u.jumps],
        "base_value": u.base_value,
    }


def sbv_from_json(doc: dict[str, Any]) -> SbvFunction:
    """Parse the JSON document produced by :func:`sbv_to_json`.

    Raises:
        SpecError: If keys are missing or have the wrong shape.
    """
    try:
        grid = Grid(float(doc["a"]), float(doc["b"]), int(doc["n"]))
        ac_values = np.asarray(doc["ac_values"], dtype=np.float64)
        jumps = tuple(Jump(float(j["x"]), float(j["p"])) for j in doc.get("jumps", []))
        base = float(doc.get("base_value", 0.0))
    except (KeyError, TypeError, ValueError) as e:
        msg = f"malformed SbvFunction document: {e}"
        raise SpecError(msg) from e
    try:
        return SbvFunction(grid, ac_values, jumps, base)
    except DomainError as e:
        msg = f"invalid SbvFunction document: {e}"
        raise SpecError(msg) from e


def load_sbv(path: str | Path) -> SbvFunction:
    """Read an SbvFunction JSON file."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        msg = f"cannot read SbvFunction from {path}: {e}"
        raise SpecError(msg) from e
    if not isinstance(doc, dict):
        msg = f"{path} does not hold a JSON object"
        raise SpecError(msg)
    return sbv_from_json(doc)
