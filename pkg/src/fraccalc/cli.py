# this_file: src/fraccalc/cli.py
"""Command-line interface: operators, sweeps, reports and the acceptance suite."""

import inspect
import math
import sys
from pathlib import Path
from typing import Any

import fire
import numpy as np
from fire.core import FireExit
from loguru import logger
from rich.console import Console
from rich.table import Table

from fraccalc import __version__
from fraccalc.config import RunConfig
from fraccalc.corpus import CantorVitali, CorpusFunction, parse_function_spec
from fraccalc.errors import FracCalcError, SpecError
from fraccalc.funcspace import Grid, SbvFunction, load_sbv, sample
from fraccalc.limits import (
    CANTOR_DERIVATIVE_ORDERS,
    CANTOR_EXPONENT,
    CANTOR_LIFT_ORDERS,
    LOG_RECIPROCAL_ORDERS,
    S_TO_ONE,
    S_TO_ZERO,
    WEIERSTRASS_ORDERS,
    cantor_report,
    embedding_report,
    holder_shift_report,
    ipp_terms,
    log_reciprocal_report,
    marchaud_eps_diagnostic,
    sweep_s_to_one_norm,
    sweep_s_to_zero,
    weak_star_test,
    weierstrass_report,
)
from fraccalc.operators import caputo_derivative, marchaud_derivative, rl_derivative, rl_integral
from fraccalc.output import Series, render_csv, render_json, render_svg, write_text
from fraccalc.special import gamma
from fraccalc.types import FracParams, Side, SweepReport
from fraccalc.verify import COS_LIKE, run_verification

console = Console(stderr=True)

EMBEDDING_CORPUS = ("power:1", "power:2", COS_LIKE, "heaviside:0.5", "constant:1")

EXIT_VERIFY_FAILED = 1
EXIT_SPEC_ERROR = 2
EXIT_DOMAIN_ERROR = 3

COMMAND_NAMES = ("compute", "sweep", "ipp", "report", "verify", "version")


def _configure_logging(*, verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def _load_function(spec: str, grid: Grid) -> tuple[SbvFunction, CorpusFunction | None]:
    """A corpus spec sampled on ``grid``, or an SbvFunction read from a JSON file."""
    if spec.endswith(".json") or Path(spec).is_file():
        u = load_sbv(spec)
        if u.grid != grid:
            logger.info("using the grid stored in {}: {}", spec, u.grid)
        return u, None
    f = parse_function_spec(spec)
    return sample(f, grid), f


def _grid(cfg: RunConfig) -> Grid:
    return Grid(cfg.a, cfg.b, cfg.grid_n)


def _sweep_table(report: SweepReport) -> tuple[list[str], list[list[Any]]]:
    header = [report.parameter_name, "functional", "target", "converged"]
    rows: list[list[Any]] = [[p.parameter, p.value, report.target, report.converged] for p in report.points]
    if report.secondary:
        header += ["secondary", "secondary_target"]
        for row, point in zip(rows, report.secondary, strict=True):
            row += [point.value, report.secondary_target]
    return header, rows


class CLI:
    """Fractional calculus on an interval.

    Every command accepts ``--config file.json``; flags given on the command
    line win over the file. Data goes to ``--output`` (or standard output) as
    CSV, SVG or JSON.
    """

    def compute(
        self,
        fn: str | None = None,
        op: str | None = None,
        s: float | None = None,
        grid_n: int | None = None,
        interval: Any = None,
        output: str | None = None,
        format: str | None = None,  # noqa: A002
        eps_multiples: Any = None,
        config: str | None = None,
        verbose: bool | None = None,
    ) -> None:
        """Apply one operator to a function.

        Args:
            fn: Corpus spec such as ``power:1`` or a JSON SbvFunction path
            op: rl-int, rl-der, marchaud or caputo, optionally with a ``-right`` suffix
            s: Order in (0, 1)
            grid_n: Number of grid cells
            interval: ``a,b``
            output: Output file; standard output when omitted
            format: csv, svg or json
            eps_multiples: Marchaud truncation in grid cells; the smallest is used
            config: JSON configuration file
            verbose: Log at DEBUG level
        """
        cfg = RunConfig.from_sources(
            "compute",
            config,
            function_spec=fn,
            operator=op,
            s=s,
            grid_n=grid_n,
            interval=interval,
            output=output,
            format=format,
            eps_multiples=eps_multiples,
            verbose=verbose,
        )
        _configure_logging(verbose=cfg.verbose)
        u, corpus = _load_function(cfg.function_spec or "", _grid(cfg))
        grid = u.grid
        name = cfg.operator.removesuffix("-right")
        side = Side.RIGHT if cfg.operator.endswith("-right") else Side.LEFT
        params = FracParams(cfg.s[0], side)
        match name:
            case "rl-int":
                result = rl_integral(u, params)
            case "rl-der":
                result = rl_derivative(u, params)
            case "marchaud":
                result = marchaud_derivative(u, params, min(cfg.eps_multiples) * grid.h)
            case _:
                result = caputo_derivative(u, params)

        mask = result.node_mask()
        x = grid.nodes[mask]
        values = result.values[mask]
        exact = self._exact(corpus, name, side, params.s, x, u)
        header = ["x", "value"]
        rows: list[list[Any]] = [[xi, vi] for xi, vi in zip(x, values, strict=True)]
        if exact is not None:
            header += ["exact", "abs_error"]
            for row, e in zip(rows, exact, strict=True):
                row += [e, abs(row[1] - e)]
        label = f"{cfg.operator} s={params.s:g} {cfg.function_spec}"
        series = [Series("value", x, values)]
        if exact is not None:
            series.append(Series("exact", x, exact))
        doc = {"function": cfg.function_spec, "operator": cfg.operator, "s": params.s, "columns": header, "rows": rows}
        self._emit(cfg, header, rows, render_svg(label, series), doc)
        if exact is not None:
            finite = np.isfinite(exact)
            worst = float(np.max(np.abs(values[finite] - exact[finite]))) if finite.any() else math.nan
            console.print(f"[green]{label}[/green]: max abs error {worst:.3g}")

    @staticmethod
    def _exact(
        corpus: CorpusFunction | None, name: str, side: Side, s: float, x: np.ndarray, u: SbvFunction
    ) -> np.ndarray | None:
        if corpus is None or side is Side.RIGHT:
            return None
        a, b = u.grid.a, u.grid.b
        match name:
            case "rl-int":
                exact = corpus.exact_rl_integral(x, s, a, b)
            case "rl-der":
                exact = corpus.exact_rl_derivative(x, s, a, b)
            case "caputo":
                exact = corpus.exact_rl_derivative(x, s, a, b)
                if exact is not None and u.base_value != 0.0:
                    # Caputo drops the u(a)(x - a)^(-s)/Γ(1 - s) term and vanishes at a for bounded slopes.
                    inner = x > a
                    base_term = u.base_value * np.power(np.where(inner, x - a, 1.0), -s) / float(gamma(1.0 - s))
                    exact = np.where(inner, np.asarray(exact, dtype=np.float64) - base_term, 0.0)
            case _:
                return None
        return None if exact is None else np.asarray(exact, dtype=np.float64)

    def sweep(
        self,
        fn: str | None = None,
        kind: str | None = None,
        s: Any = None,
        grid_n: int | None = None,
        interval: Any = None,
        output: str | None = None,
        format: str | None = None,  # noqa: A002
        eps_multiples: Any = None,
        config: str | None = None,
        verbose: bool | None = None,
    ) -> None:
        """Run a limit experiment.

        Args:
            fn: Corpus spec or JSON SbvFunction path
            kind: s-to-zero, s-to-one, marchaud-eps or weak-star
            s: Orders (comma-separated) for s sweeps, or the single order of marchaud-eps / weak-star
            grid_n: Number of grid cells
            interval: ``a,b``
            output: Output file; standard output when omitted
            format: csv, svg or json
            eps_multiples: Marchaud truncations in grid cells, decreasing
            config: JSON configuration file
            verbose: Log at DEBUG level
        """
        cfg = RunConfig.from_sources(
            "sweep",
            config,
            function_spec=fn,
            kind=kind,
            s=s,
            grid_n=grid_n,
            interval=interval,
            output=output,
            format=format,
            eps_multiples=eps_multiples,
            verbose=verbose,
        )
        _configure_logging(verbose=cfg.verbose)
        u, _ = _load_function(cfg.function_spec or "", _grid(cfg))
        if cfg.kind == "weak-star":
            order = cfg.s[0] if cfg.s else 0.995
            results = weak_star_test(u, order)
            header = ["test_function", "computed", "limit", "error", "s"]
            rows = [[r.test_function, r.computed_pairing, r.analytic_limit, r.error, r.s_used] for r in results]
            series = [Series("error", list(range(len(results))), [r.error for r in results])]
            doc = {"kind": cfg.kind, "columns": header, "rows": rows}
            self._emit(cfg, header, rows, render_svg(f"weak-* errors, s={order:g}", series, x_label="φ"), doc)
            return

        match cfg.kind:
            case "s-to-zero":
                report = sweep_s_to_zero(u, cfg.s or S_TO_ZERO)
            case "s-to-one":
                report = sweep_s_to_one_norm(u, cfg.s or S_TO_ONE)
            case _:
                order = cfg.s[0] if cfg.s else 0.5
                report = marchaud_eps_diagnostic(u, order, [m * u.grid.h for m in cfg.eps_multiples])
        header, rows = _sweep_table(report)
        series = [Series(report.functional, report.parameters, report.values)]
        if report.secondary:
            series.append(Series(report.secondary_functional, report.parameters, [p.value for p in report.secondary]))
        svg = render_svg(
            f"{cfg.kind} sweep of {cfg.function_spec}",
            series,
            x_label=report.parameter_name,
            y_label=report.functional,
            hline=report.target,
        )
        doc = {"kind": cfg.kind, "functional": report.functional, "columns": header, "rows": rows}
        self._emit(cfg, header, rows, svg, doc)
        console.print(f"[bold]{cfg.kind}[/bold]: last {report.last.value:.6g}, converged = {report.converged}")

    def ipp(
        self,
        fn: str | None = None,
        test_function: str | None = None,
        s: float | None = None,
        grid_n: int | None = None,
        interval: Any = None,
        output: str | None = None,
        format: str | None = None,  # noqa: A002
        config: str | None = None,
        verbose: bool | None = None,
    ) -> None:
        """Check fractional integration by parts for a pair (u, v).

        Args:
            fn: The function u
            test_function: The partner function v
            s: Order in (0, 1)
            grid_n: Number of grid cells
            interval: ``a,b``
            output: Output file; standard output when omitted
            format: csv, svg or json
            config: JSON configuration file
            verbose: Log at DEBUG level
        """
        cfg = RunConfig.from_sources(
            "ipp",
            config,
            function_spec=fn,
            test_function=test_function,
            s=s,
            grid_n=grid_n,
            interval=interval,
            output=output,
            format=format,
            verbose=verbose,
        )
        _configure_logging(verbose=cfg.verbose)
        grid = _grid(cfg)
        u, _ = _load_function(cfg.function_spec or "", grid)
        v, _ = _load_function(cfg.test_function or "", grid)
        terms = ipp_terms(u, v, cfg.s[0])
        header = ["s", "lhs", "right_pairing", "boundary_b", "boundary_a", "rhs", "residual", "scale"]
        rows = [
            [
                cfg.s[0],
                terms.lhs,
                terms.right_pairing,
                terms.boundary_b,
                terms.boundary_a,
                terms.rhs,
                terms.residual,
                terms.scale,
            ]
        ]
        series = [Series("lhs", [0, 1], [terms.lhs, terms.lhs]), Series("rhs", [0, 1], [terms.rhs, terms.rhs])]
        self._emit(cfg, header, rows, render_svg("integration by parts", series), {"columns": header, "rows": rows})
        console.print(f"residual {terms.residual:.3g} (relative {terms.residual / terms.scale:.3g})")

    def report(
        self,
        kind: str | None = None,
        fn: str | None = None,
        s: Any = None,
        s_prime: float | None = None,
        grid_n: int | None = None,
        interval: Any = None,
        output: str | None = None,
        format: str | None = None,  # noqa: A002
        config: str | None = None,
        verbose: bool | None = None,
    ) -> None:
        """Report-only experiments: embeddings, Weierstrass, Cantor-Vitali and Hölder regularity.

        Args:
            kind: embedding, weierstrass, cantor, holder or log-reciprocal
            fn: Function (embedding: defaults to the built-in corpus)
            s: Order(s)
            s_prime: Gagliardo order of the embedding, above s
            grid_n: Number of grid cells
            interval: ``a,b``
            output: Output file; standard output when omitted
            format: csv, svg or json
            config: JSON configuration file
            verbose: Log at DEBUG level
        """
        cfg = RunConfig.from_sources(
            "report",
            config,
            kind=kind,
            function_spec=fn,
            s=s,
            s_prime=s_prime,
            grid_n=grid_n,
            interval=interval,
            output=output,
            format=format,
            verbose=verbose,
        )
        _configure_logging(verbose=cfg.verbose)
        grid = _grid(cfg)
        header: list[str]
        rows: list[list[Any]]
        match cfg.kind:
            case "embedding":
                order = cfg.s[0] if cfg.s else 0.3
                s_prime_value = cfg.s_prime if cfg.s_prime is not None else 0.6
                specs = (cfg.function_spec,) if cfg.function_spec else EMBEDDING_CORPUS
                header = ["function", "s", "s_prime", "lhs", "rhs", "ratio"]
                rows = []
                for spec in specs:
                    r = embedding_report(_load_function(spec, grid)[0], order, s_prime_value)
                    rows.append([spec, r.s, r.s_prime, r.lhs, r.rhs, r.ratio])
                series = [Series("ratio", list(range(len(rows))), [row[-1] for row in rows])]
                console.print(f"max embedding ratio {max(row[-1] for row in rows):.6g}")
            case "weierstrass":
                u, _ = _load_function(cfg.function_spec or "weierstrass:2:20", grid)
                sweep = weierstrass_report(u, cfg.s or WEIERSTRASS_ORDERS)
                header = ["s", "sup_abs_derivative"]
                rows = [[p.parameter, p.value] for p in sweep.points]
                series = [Series(sweep.functional, sweep.parameters, sweep.values)]
            case "holder":
                u, corpus = _load_function(cfg.function_spec or "cantor:12", grid)
                base = CANTOR_EXPONENT if isinstance(corpus, CantorVitali) else None
                lift = holder_shift_report(u, cfg.s or CANTOR_LIFT_ORDERS, base_exponent=base)
                header = ["operator", "s", "holder_exponent", "target"]
                rows = [["rl-int", *row] for row in zip(lift.orders, lift.exponents, lift.targets, strict=True)]
                series = [Series("I^s u", lift.orders, lift.exponents)]
                below = [order for order in (cfg.s or CANTOR_DERIVATIVE_ORDERS) if order < lift.base_exponent]
                if below:
                    drop = holder_shift_report(u, below, raised=False, base_exponent=lift.base_exponent)
                    rows += [["rl-der", *row] for row in zip(drop.orders, drop.exponents, drop.targets, strict=True)]
                    series.append(Series("D^s u", drop.orders, drop.exponents))
                console.print(f"Hölder exponent of u {lift.base_exponent:.4f}, lift shortfall {lift.shortfall:.3g}")
            case "log-reciprocal":
                log_report = log_reciprocal_report(grid, cfg.s or LOG_RECIPROCAL_ORDERS)
                header = ["s", "seminorm_half_grid", "seminorm"]
                rows = [
                    [order, coarse, fine]
                    for order, coarse, fine in zip(
                        log_report.orders, log_report.seminorms_coarse, log_report.seminorms_fine, strict=True
                    )
                ]
                series = [Series("[u]_{s,1}", log_report.orders, log_report.seminorms_fine)]
                console.print(
                    f"Hölder exponent {log_report.coarse_exponent:.4f} on {grid.n // 4} cells, "
                    f"{log_report.fine_exponent:.4f} on {grid.n}"
                )
            case _:
                corpus = parse_function_spec(cfg.function_spec or "cantor:12")
                level = getattr(corpus, "level", None)
                if level is None:
                    msg = f"cantor report needs a cantor spec, got '{cfg.function_spec}'"
                    raise SpecError(msg)
                cantor = cantor_report(grid, level, cfg.s[0] if cfg.s else 0.4)
                header = ["level", "s", "holder_exponent", "sup_coarse", "sup_fine", "sup_ratio"]
                rows = [
                    [
                        cantor.level,
                        cantor.s,
                        cantor.holder_exponent,
                        cantor.sup_coarse,
                        cantor.sup_fine,
                        cantor.sup_ratio,
                    ]
                ]
                series = [Series("sup|D^s u|", [grid.n // 2, grid.n], [cantor.sup_coarse, cantor.sup_fine])]
        doc = {"kind": cfg.kind, "columns": header, "rows": rows}
        self._emit(cfg, header, rows, render_svg(f"{cfg.kind} report", series), doc)

    def verify(
        self,
        grid_n: int | None = None,
        only: Any = None,
        output: str | None = None,
        config: str | None = None,
        verbose: bool | None = None,
    ) -> None:
        """Run the acceptance suite and print a pass/fail table; exits 1 on any failure.

        Args:
            grid_n: Number of grid cells (default 4096)
            only: Comma-separated criterion families, names or numbers
            output: Optional CSV file for the table
            config: JSON configuration file
            verbose: Log at DEBUG level
        """
        cfg = RunConfig.from_sources(
            "verify", config, grid_n=grid_n, only=only, output=output, verbose=verbose, format="csv"
        )
        _configure_logging(verbose=cfg.verbose)
        results = run_verification(cfg.grid_n, cfg.only)
        if not results:
            msg = f"no criterion matches {', '.join(cfg.only)}"
            raise SpecError(msg)

        table = Table(title=f"fraccalc verification (n = {cfg.grid_n})")
        table.add_column("#", justify="right")
        table.add_column("Criterion", style="cyan")
        table.add_column("Measured", justify="right")
        table.add_column("Threshold", justify="right")
        table.add_column("Result")
        table.add_column("Detail", style="dim")
        for r in results:
            verdict = "[green]pass[/green]" if r.passed else "[red]FAIL[/red]"
            table.add_row(str(r.number), r.name, f"{r.measured:.4g}", f"{r.threshold:.4g}", verdict, r.detail)
        Console().print(table)

        if cfg.output is not None:
            header = ["number", "name", "family", "measured", "threshold", "passed"]
            rows = [[r.number, r.name, r.family, r.measured, r.threshold, r.passed] for r in results]
            write_text(render_csv(header, rows), cfg.output)
        failed = [r for r in results if not r.passed]
        if failed:
            console.print(f"[red]{len(failed)} of {len(results)} criteria failed[/red]")
            sys.exit(EXIT_VERIFY_FAILED)
        console.print(f"[green]all {len(results)} criteria passed[/green]")

    def version(self) -> None:
        """Show version information."""
        Console().print(f"fraccalc version {__version__}")

    @staticmethod
    def _emit(cfg: RunConfig, header: list[str], rows: list[list[Any]], svg: str, doc: dict[str, Any]) -> None:
        match cfg.format:
            case "svg":
                text = svg
            case "json":
                text = render_json(doc)
            case _:
                text = render_csv(header, rows)
        write_text(text, cfg.output)
        if cfg.output is not None:
            console.print(f"wrote {cfg.output}")


def _is_option(token: str) -> bool:
    if not token.startswith("-") or token in {"-", "--"}:
        return False
    try:
        float(token)
    except ValueError:
        return True
    return False


def _option_name(token: str, params: list[str]) -> str | None:
    """Parameter a ``--name[=value]`` token refers to, honouring Fire's ``--noname`` and unique prefixes."""
    name = token.lstrip("-").split("=", 1)[0].replace("-", "_")
    if name in params:
        return name
    if name.startswith("no") and name[2:] in params:
        return name[2:]
    matches = [p for p in params if p.startswith(name)]
    return matches[0] if len(matches) == 1 else None


def check_arguments(argv: list[str]) -> None:
    """Reject unknown commands, unknown options and surplus positionals before Fire runs anything.

    Raises:
        SpecError: On any argument Fire would leave unconsumed.
    """
    if not argv or _is_option(argv[0]):
        return
    command, rest = argv[0], argv[1:]
    if command not in COMMAND_NAMES:
        msg = f"unknown command '{command}'; choose from {', '.join(COMMAND_NAMES)}"
        raise SpecError(msg)
    if "--" in rest:
        rest = rest[: rest.index("--")]
    params = [p for p in inspect.signature(getattr(CLI, command)).parameters if p != "self"]
    named: set[str] = set()
    positional: list[str] = []
    i = 0
    while i < len(rest):
        token = rest[i]
        i += 1
        if not _is_option(token):
            positional.append(token)
            continue
        if token.lstrip("-") in {"help", "h"}:
            return
        name = _option_name(token, params)
        if name is None:
            msg = f"unknown option '{token.split('=', 1)[0]}' for {command}"
            raise SpecError(msg)
        named.add(name)
        if "=" not in token and i < len(rest) and not _is_option(rest[i]):
            i += 1
    free = [p for p in params if p not in named]
    if len(positional) > len(free):
        msg = f"unexpected argument(s) for {command}: {' '.join(positional[len(free) :])}"
        raise SpecError(msg)


def main() -> None:
    """Main entry point for the CLI."""
    try:
        check_arguments(sys.argv[1:])
        fire.Fire(CLI)
    except SpecError as e:
        sys.stderr.write(f"error: {e}\n")
        sys.exit(EXIT_SPEC_ERROR)
    except FracCalcError as e:
        sys.stderr.write(f"error: {e}\n")
        sys.exit(EXIT_DOMAIN_ERROR)
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        sys.exit(EXIT_SPEC_ERROR)
    except FireExit as e:
        if e.code in (0, None):
            raise
        sys.stderr.write("error: invalid command line; see fraccalc --help\n")
        sys.exit(EXIT_SPEC_ERROR)
