# this_file: src/fraccalc/config.py
"""Run configuration: built-in defaults, then a JSON file, then command-line flags."""

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from loguru import logger

from fraccalc.errors import SpecError

COMMANDS = ("compute", "sweep", "verify", "ipp", "report")
OPERATORS = (
    "rl-int",
    "rl-der",
    "marchaud",
    "caputo",
    "rl-int-right",
    "rl-der-right",
    "marchaud-right",
    "caputo-right",
)
SWEEP_KINDS = ("s-to-zero", "s-to-one", "marchaud-eps", "weak-star")
REPORT_KINDS = ("embedding", "weierstrass", "cantor", "holder", "log-reciprocal")
FORMATS = ("csv", "svg", "json")
MIN_GRID_N = 16


def _as_floats(value: Any, name: str) -> tuple[float, ...]:
    if isinstance(value, str):
        value = [part for part in value.replace(" ", "").split(",") if part]
    elif isinstance(value, int | float):
        value = [value]
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError) as e:
        msg = f"{name} must be a number or a comma-separated list of numbers, got {value!r}"
        raise SpecError(msg) from e


def _as_strings(value: Any) -> tuple[str, ...]:
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(",") if part.strip())
    return tuple(str(v) for v in value)


@dataclass(frozen=True)
class RunConfig:
    """Everything one CLI invocation needs.

    Attributes:
        command: One of ``compute``, ``sweep``, ``verify``, ``ipp``, ``report``.
        function_spec: Corpus spec (``power:2``) or path to a JSON SbvFunction.
        s: Order(s); one value for ``compute``/``ipp``, a list for sweeps.
        operator: Operator name for ``compute``.
        grid_n: Number of grid cells.
        interval: The interval ``(a, b)``.
        output: Output path; ``None`` writes to standard output.
        format: ``csv``, ``svg`` or ``json``.
        kind: Sweep kind or report kind.
        eps_multiples: Marchaud truncations as multiples of the grid spacing.
        s_prime: Gagliardo order of the embedding report.
        p: Exponent of L^p and Gagliardo functionals.
        test_function: Partner function ``v`` of ``ipp``.
        only: Criterion families ``verify`` restricts itself to.
        verbose: Log at DEBUG instead of WARNING.
    """

    command: str
    function_spec: str | None = None
    s: tuple[float, ...] = ()
    operator: str = "rl-der"
    grid_n: int = 4096
    interval: tuple[float, float] = (0.0, 1.0)
    output: str | None = None
    format: str = "csv"
    kind: str | None = None
    eps_multiples: tuple[int, ...] = (16, 8, 4, 2, 1)
    s_prime: float | None = None
    p: float = 1.0
    test_function: str | None = None
    only: tuple[str, ...] = ()
    verbose: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", _as_floats(self.s, "s"))
        interval = _as_floats(self.interval, "interval")
        if len(interval) != 2 or not all(math.isfinite(x) for x in interval) or not interval[0] < interval[1]:
            msg = f"interval must be two finite numbers a < b, got {self.interval!r}"
            raise SpecError(msg)
        object.__setattr__(self, "interval", (interval[0], interval[1]))
        object.__setattr__(self, "only", _as_strings(self.only))
        multiples = _as_floats(self.eps_multiples, "eps_multiples")
        if not multiples or any(m < 1 or m != int(m) for m in multiples):
            msg = f"eps_multiples must be positive integers, got {self.eps_multiples!r}"
            raise SpecError(msg)
        object.__setattr__(self, "eps_multiples", tuple(int(m) for m in multiples))
        self._validate()

    def _validate(self) -> None:
        if self.command not in COMMANDS:
            msg = f"unknown command '{self.command}', expected one of {', '.join(COMMANDS)}"
            raise SpecError(msg)
        if isinstance(self.grid_n, bool) or int(self.grid_n) != self.grid_n or self.grid_n < MIN_GRID_N:
            msg = f"grid_n must be an integer >= {MIN_GRID_N}, got {self.grid_n}"
            raise SpecError(msg)
        if self.format not in FORMATS:
            msg = f"unknown format '{self.format}', expected one of {', '.join(FORMATS)}"
            raise SpecError(msg)
        if not (math.isfinite(self.p) and self.p >= 1.0):
            msg = f"p must be >= 1, got {self.p}"
            raise SpecError(msg)
        match self.command:
            case "compute":
                self._require_function()
                self._require_single_s()
                if self.operator not in OPERATORS:
                    msg = f"unknown operator '{self.operator}', expected one of {', '.join(OPERATORS)}"
                    raise SpecError(msg)
            case "sweep":
                self._require_function()
                if self.kind not in SWEEP_KINDS:
                    msg = f"sweep needs --kind, one of {', '.join(SWEEP_KINDS)}; got {self.kind!r}"
                    raise SpecError(msg)
                if self.kind in ("marchaud-eps", "weak-star") and len(self.s) > 1:
                    msg = f"{self.kind} sweep takes a single order s, got {self.s}"
                    raise SpecError(msg)
            case "ipp":
                self._require_function()
                self._require_single_s()
                if not self.test_function:
                    msg = "ipp needs --test-function, the partner function v"
                    raise SpecError(msg)
            case "report":
                if self.kind not in REPORT_KINDS:
                    msg = f"report needs --kind, one of {', '.join(REPORT_KINDS)}; got {self.kind!r}"
                    raise SpecError(msg)
            case _:
                pass

    def _require_function(self) -> None:
        if not self.function_spec:
            msg = f"{self.command} needs --fn, a corpus spec or a JSON SbvFunction path"
            raise SpecError(msg)

    def _require_single_s(self) -> None:
        if len(self.s) != 1:
            msg = f"{self.command} needs exactly one order --s, got {self.s or 'none'}"
            raise SpecError(msg)

    @property
    def a(self) -> float:
        return self.interval[0]

    @property
    def b(self) -> float:
        return self.interval[1]

    @classmethod
    def from_sources(cls, command: str, config_path: str | None = None, **flags: Any) -> "RunConfig":
        """Merge defaults, the JSON file at ``config_path`` and the flags that were given.

        Flags left at ``None`` do not override the file.

        Raises:
            SpecError: On an unreadable file, unknown keys or invalid values.
        """
        known = {f.name for f in fields(cls)}
        values: dict[str, Any] = {}
        if config_path is not None:
            values.update(_read_config_file(config_path))
        values.update({k: v for k, v in flags.items() if v is not None})
        unknown = sorted(set(values) - known)
        if unknown:
            msg = f"unknown configuration keys: {', '.join(unknown)}"
            raise SpecError(msg)
        values["command"] = command
        try:
            config = cls(**values)
        except TypeError as e:
            msg = f"invalid configuration: {e}"
            raise SpecError(msg) from e
        logger.debug("run configuration: {}", config)
        return config

    def with_overrides(self, **changes: Any) -> "RunConfig":
        return replace(self, **changes)


def _read_config_file(path: str) -> dict[str, Any]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        msg = f"cannot read configuration {path}: {e}"
        raise SpecError(msg) from e
    if not isinstance(doc, dict):
        msg = f"configuration {path} must hold a JSON object"
        raise SpecError(msg)
    # The file may use the command-line spelling of a key.
    return {key.replace("-", "_"): value for key, value in doc.items() if key != "command"}
