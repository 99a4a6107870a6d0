# this_file: src/fraccalc/verify.py
"""Acceptance suite: closed-form oracles and limit theorems checked on a grid.

Each criterion is a function of the grid returning a :class:`Measurement`;
:func:`run_verification` runs the selected ones in parallel and never lets a
failing criterion abort the others.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger

from fraccalc.corpus import Constant, Heaviside, Polynomial, Power, Weierstrass, parse_function_spec
from fraccalc.errors import FracCalcError
from fraccalc.funcspace import Grid, Jump, SbvFunction, sample
from fraccalc.limits import (
    CANTOR_DERIVATIVE_ORDERS,
    CANTOR_EXPONENT,
    cantor_holder_report,
    cantor_report,
    embedding_report,
    ipp_terms,
    is_nonincreasing,
    log_reciprocal_report,
    marchaud_eps_diagnostic,
    sweep_s_to_one_norm,
    sweep_s_to_zero,
    weak_star_test,
    weierstrass_report,
)
from fraccalc.norms import holder_exponent, lp_norm, total_variation
from fraccalc.operators import caputo_derivative, derivative_result, rl_derivative, rl_integral, sbv_as_result
from fraccalc.parallel import parallel_map
from fraccalc.quadrature import weakly_singular_integral
from fraccalc.special import gamma
from fraccalc.types import FracParams

COS_LIKE = "poly:1,0,-0.5,0,0.041666666666666664"
SMOOTH_SPECS = ("power:1", "power:2", COS_LIKE)


@dataclass(frozen=True)
class Measurement:
    measured: float
    threshold: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    family: str
    description: str
    check: Callable[[Grid], Measurement]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    family: str
    description: str
    measured: float
    threshold: float
    passed: bool
    detail: str


def _at_most(measured: float, threshold: float, detail: str = "") -> Measurement:
    return Measurement(measured, threshold, bool(measured <= threshold), detail)


def _two_jump(grid: Grid, *, with_slope: bool) -> SbvFunction:
    ac = sample(Power(1.0), grid).ac_values if with_slope else np.zeros(grid.n + 1)
    return SbvFunction(grid, ac, (Jump(0.3, 1.0), Jump(0.7, 2.0)))


def _sampled(spec: str, grid: Grid) -> SbvFunction:
    return sample(parse_function_spec(spec), grid)


def check_power_closed_form(grid: Grid) -> Measurement:
    worst = 0.0
    mask = grid.nodes >= 0.1
    for k in (1.0, 2.0):
        f = Power(k)
        u = sample(f, grid)
        for s in (0.25, 0.5, 0.75):
            computed = rl_derivative(u, FracParams(s)).values[mask]
            exact = f.exact_rl_derivative(grid.nodes[mask], s, grid.a, grid.b)
            worst = max(worst, float(np.max(np.abs(computed - exact) / np.abs(exact))))
    return _at_most(worst, 1e-3, "max relative error on [0.1, 1]")


def check_null_derivative(grid: Grid) -> Measurement:
    s = 0.5
    u = sample(Power(s - 1.0), grid)
    value = lp_norm(rl_derivative(u, FracParams(s)), 1.0, lower=max(0.1, grid.a)).value
    return _at_most(value, 5e-3, "L1 norm on [0.1, 1]; first cells excluded")


def check_heaviside_norm(grid: Grid) -> Measurement:
    alpha = 0.25
    u = sample(Heaviside(alpha), grid)
    worst = 0.0
    for s in (0.25, 0.5, 0.9, 0.999):
        exact = (grid.b - alpha) ** (1.0 - s) / float(gamma(2.0 - s))
        worst = max(worst, abs(lp_norm(rl_derivative(u, FracParams(s)), 1.0).value - exact))
    return _at_most(worst, 1e-8)


def check_strict_convergence(grid: Grid) -> Measurement:
    u = sample(Heaviside(0.25), grid)
    report = sweep_s_to_one_norm(u, (0.5, 0.9, 0.99, 0.999))
    gap = abs(report.last.value - total_variation(u).value)
    return _at_most(gap, 1e-2, f"||D^0.999 u||_1 = {report.last.value:.6g}")


def check_sbv_limit(grid: Grid) -> Measurement:
    u = _two_jump(grid, with_slope=True)
    value = lp_norm(rl_derivative(u, FracParams(0.999)), 1.0).value
    return _at_most(abs(value - 4.0), 2e-2, f"||D^0.999 u||_1 = {value:.6g}")


def check_s_to_zero(grid: Grid) -> Measurement:
    worst = 0.0
    for spec in ("power:1", "power:2", "heaviside:0.5"):
        worst = max(worst, sweep_s_to_zero(_sampled(spec, grid), (0.5, 0.1, 0.01, 0.001)).last.value)
    return _at_most(worst, 1e-2, "||I^0.001 u - u||_1")


def check_inversion(grid: Grid) -> Measurement:
    worst = 0.0
    for spec in SMOOTH_SPECS:
        f = _sampled(spec, grid)
        scale = lp_norm(f, 1.0).value
        for s in (0.3, 0.5, 0.7):
            params = FracParams(s)
            recovered = rl_derivative(rl_integral(f, params).to_sbv(), params)
            worst = max(worst, lp_norm(recovered - sbv_as_result(f), 1.0).value / scale)
    return _at_most(worst, 5e-3, "relative L1 error of D^s I^s f")


def check_semigroup(grid: Grid) -> Measurement:
    worst = 0.0
    for spec in SMOOTH_SPECS:
        f = _sampled(spec, grid)
        scale = lp_norm(f, 1.0).value
        inner = rl_integral(f, FracParams(0.4)).to_sbv()
        composed = rl_integral(inner, FracParams(0.3))
        direct = rl_integral(f, FracParams(0.7))
        worst = max(worst, lp_norm(composed - direct, 1.0).value / scale)
    return _at_most(worst, 5e-3, "relative L1 error of I^0.3 I^0.4 f - I^0.7 f")


def check_caputo_relation(grid: Grid) -> Measurement:
    s = 0.5
    u = sample(Polynomial((1.0, 0.0, 1.0)), grid)
    params = FracParams(s)
    nodes = grid.nodes[1:]
    base_term = u.base_value * (nodes - grid.a) ** -s / float(gamma(1.0 - s))
    residual = rl_derivative(u, params).values[1:] - caputo_derivative(u, params).values[1:] - base_term
    return _at_most(float(np.max(np.abs(residual))), 1e-6, "max node residual, j >= 1")


def check_constant_anomaly(grid: Grid) -> Measurement:
    u = sample(Constant(1.0), grid)
    report = sweep_s_to_one_norm(u, (0.5, 0.9, 0.99, 0.999))
    slope_norm = lp_norm(derivative_result(u), 1.0).value
    gap = abs(report.last.value - 1.0)
    measurement = _at_most(gap, 1e-2, f"||D^0.999 u||_1 = {report.last.value:.6g}, ||u'||_1 = {slope_norm:g}")
    if slope_norm != 0.0:
        return Measurement(gap, 1e-2, False, measurement.detail)
    return measurement


def check_weak_star(grid: Grid) -> Measurement:
    corpus = [_sampled("constant:1", grid), _sampled("heaviside:0.5", grid), _two_jump(grid, with_slope=False)]
    worst = 0.0
    for u in corpus:
        worst = max(worst, *(r.error for r in weak_star_test(u, 0.995)))
    return _at_most(worst, 2e-2, "max |pairing - limit| at s = 0.995")


def ipp_pairs(grid: Grid) -> list[tuple[SbvFunction, SbvFunction]]:
    return [
        (_sampled("power:2", grid), _sampled("cos:2", grid)),
        (_sampled("power:1", grid), _sampled("cos:1", grid)),
        (_sampled(COS_LIKE, grid), _sampled("poly:0,0,1", grid)),
    ]


def check_ipp(grid: Grid) -> Measurement:
    worst = 0.0
    for u, v in ipp_pairs(grid):
        for s in (0.3, 0.6):
            terms = ipp_terms(u, v, s)
            worst = max(worst, terms.residual / terms.scale)
    return _at_most(worst, 5e-3, "residual / max(|LHS|, |RHS|, 1)")


def check_holder_regularization(grid: Grid) -> Measurement:
    u = sample(Heaviside(0.5), grid)
    margin = math.inf
    for s in (0.3, 0.5, 0.7):
        margin = min(margin, holder_exponent(rl_integral(u, FracParams(s))).value - s)
    # Passing means every exponent is at least s - 0.05.
    return Measurement(margin, -0.05, margin >= -0.05, "min over s of exponent - s")


def check_cantor(grid: Grid) -> Measurement:
    report = cantor_report(grid, 12, 0.4)
    ratio_gap = abs(report.sup_ratio - 1.0)
    exponent_gap = abs(report.holder_exponent - CANTOR_EXPONENT)
    detail = f"sup ratio {report.sup_ratio:.4f}, Hölder exponent {report.holder_exponent:.4f}"
    passed = ratio_gap <= 0.2 and exponent_gap <= 0.05
    return Measurement(exponent_gap, 0.05, passed, detail)


def check_marchaud(grid: Grid) -> Measurement:
    s = 0.5
    f = sample(Power(1.0), grid)
    u = rl_integral(f, FracParams(s)).to_sbv()
    report = marchaud_eps_diagnostic(u, s, reference=f)
    distance = float(report.extras["reference_distance"])
    monotone = is_nonincreasing(report.values)
    detail = "increments " + ", ".join(f"{v:.3g}" for v in report.values)
    return Measurement(distance, 1e-2, distance <= 1e-2 and monotone, detail)


def quadrature_error(n: int, s: float = 0.5) -> float:
    grid = Grid(0.0, 1.0, n)
    f = Power(3.0)
    values = f.evaluate(grid.nodes, grid.a, grid.b)
    computed = weakly_singular_integral(grid, values, s - 1.0) / float(gamma(s))
    exact = f.exact_rl_integral(grid.nodes, s, grid.a, grid.b)
    return float(np.max(np.abs(computed - exact)))


def check_quadrature_order(grid: Grid) -> Measurement:  # noqa: ARG001
    coarse, fine = quadrature_error(256), quadrature_error(2048)
    order = math.log2(coarse / fine) / 3.0
    return Measurement(order, 2.0, 1.8 <= order <= 2.2, "empirical order between n = 256 and n = 2048")


def check_embedding_stability(grid: Grid) -> Measurement:
    coarse_grid = Grid(grid.a, grid.b, grid.n // 2)

    def max_ratio(g: Grid) -> float:
        specs = ("power:1", "heaviside:0.5", COS_LIKE)
        return max(embedding_report(_sampled(spec, g), 0.3, 0.6).ratio for spec in specs)

    coarse, fine = max_ratio(coarse_grid), max_ratio(grid)
    change = abs(fine / coarse - 1.0) if coarse else 0.0
    return _at_most(change, 0.1, f"max ratio {coarse:.6g} -> {fine:.6g} under grid doubling")


def check_weierstrass(grid: Grid) -> Measurement:
    report = weierstrass_report(sample(Weierstrass(), grid))
    sup = max(report.values)
    return Measurement(sup, math.inf, math.isfinite(sup), "sup|D^s W| over s in {0.25, 0.5, 0.75, 0.9}")


def _exponent_detail(exponents: Sequence[float], targets: Sequence[float]) -> str:
    measured = ", ".join(f"{e:.3f}" for e in exponents)
    wanted = ", ".join(f"{t:.3f}" for t in targets)
    return f"exponents {measured} for targets {wanted}"


def check_cantor_holder_lift(grid: Grid) -> Measurement:
    report = cantor_holder_report(grid)
    passed = report.shortfall <= 0.15 and report.increasing
    return Measurement(report.shortfall, 0.15, passed, _exponent_detail(report.exponents, report.targets))


def check_cantor_derivative_holder(grid: Grid) -> Measurement:
    report = cantor_holder_report(grid, s_list=CANTOR_DERIVATIVE_ORDERS, raised=False)
    return _at_most(report.shortfall, 0.05, _exponent_detail(report.exponents, report.targets))


def check_log_reciprocal(grid: Grid) -> Measurement:
    report = log_reciprocal_report(grid)
    finite = all(math.isfinite(v) and v > 0.0 for v in report.seminorms_fine)
    not_holder = report.fine_exponent < min(report.coarse_exponent, 0.5)
    passed = finite and not_holder and report.seminorm_change <= 0.05
    detail = (
        f"Hölder {report.coarse_exponent:.3f} -> {report.fine_exponent:.3f}, "
        f"seminorm change {report.seminorm_change:.3g} under grid doubling"
    )
    return Measurement(report.fine_exponent, 0.5, passed, detail)


CRITERIA: tuple[Criterion, ...] = (
    Criterion(1, "power-closed-form", "power", "D^s x^k against Γ(k+1)/Γ(k-s+1) x^(k-s)", check_power_closed_form),
    Criterion(2, "null-derivative", "power", "D^0.5 x^(-0.5) vanishes", check_null_derivative),
    Criterion(3, "heaviside-norm", "heaviside", "||D^s χ|| = 0.75^(1-s)/Γ(2-s)", check_heaviside_norm),
    Criterion(4, "strict-convergence", "s-to-one", "||D^s χ|| -> TV as s -> 1", check_strict_convergence),
    Criterion(5, "sbv-limit", "s-to-one", "||D^s u|| -> ||u||_SBV as s -> 1", check_sbv_limit),
    Criterion(6, "s-to-zero", "s-to-zero", "||I^s u - u|| -> 0 as s -> 0", check_s_to_zero),
    Criterion(7, "inversion", "inversion", "D^s I^s f = f", check_inversion),
    Criterion(8, "semigroup", "semigroup", "I^0.3 I^0.4 f = I^0.7 f", check_semigroup),
    Criterion(9, "caputo-relation", "caputo", "D^s u - C^s u = u(a)(x-a)^(-s)/Γ(1-s)", check_caputo_relation),
    Criterion(10, "constant-anomaly", "s-to-one", "||D^s 1|| -> 1 while ||u'|| = 0", check_constant_anomaly),
    Criterion(11, "weak-star", "weak-star", "pairings converge to the limit measure", check_weak_star),
    Criterion(12, "integration-by-parts", "ipp", "fractional integration by parts", check_ipp),
    Criterion(13, "holder-regularization", "holder", "I^s maps BV into C^(0,s)", check_holder_regularization),
    Criterion(14, "cantor-vitali", "holder", "Cantor-Vitali derivative and exponent", check_cantor),
    Criterion(15, "marchaud-agreement", "marchaud", "Marchaud derivative recovers f", check_marchaud),
    Criterion(16, "quadrature-order", "quadrature", "second-order product rule", check_quadrature_order),
    Criterion(
        17, "embedding-stability", "embedding", "embedding ratio stable under refinement", check_embedding_stability
    ),
    Criterion(18, "weierstrass-bounded", "weierstrass", "D^s W stays bounded", check_weierstrass),
    Criterion(19, "cantor-holder-lift", "holder", "I^s lifts C^(0,a) into C^(0,a+s)", check_cantor_holder_lift),
    Criterion(
        20, "cantor-derivative-holder", "holder", "D^s u stays in C^(0,a-s) for s < a", check_cantor_derivative_holder
    ),
    Criterion(21, "log-reciprocal", "holder", "1/ln(t/2) is in W^(s,1) but not Hölder", check_log_reciprocal),
)


def select_criteria(only: Sequence[str] = ()) -> list[Criterion]:
    """Criteria whose family, name or number is listed in ``only`` (all when empty)."""
    if not only:
        return list(CRITERIA)
    wanted = {item.strip().lower() for item in only}
    return [c for c in CRITERIA if c.family in wanted or c.name in wanted or str(c.number) in wanted]


def _run(criterion: Criterion, grid: Grid) -> CriterionResult:
    try:
        m = criterion.check(grid)
    except FracCalcError as e:
        m = Measurement(math.nan, math.nan, False, f"error: {e}")
    level = "INFO" if m.passed else "WARNING"
    logger.log(
        level, "criterion {} {}: measured {} (threshold {})", criterion.number, criterion.name, m.measured, m.threshold
    )
    return CriterionResult(
        criterion.number,
        criterion.name,
        criterion.family,
        criterion.description,
        m.measured,
        m.threshold,
        m.passed,
        m.detail,
    )


def run_verification(grid_n: int = 4096, only: Sequence[str] = ()) -> list[CriterionResult]:
    """Run the selected criteria on [0, 1] split into ``grid_n`` cells."""
    grid = Grid(0.0, 1.0, grid_n)
    selected = select_criteria(only)
    logger.info("running {} criteria on {} cells", len(selected), grid_n)
    return parallel_map(lambda c: _run(c, grid), selected)
