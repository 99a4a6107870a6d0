# this_file: src/fraccalc/limits.py
"""Limit experiments: s → 0, s → 1, weak-* pairings, ε → 0 and embeddings.

Every sweep point is independent, so points are evaluated through
:func:`fraccalc.parallel.parallel_map` and assembled afterwards.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger

from fraccalc.corpus import CantorVitali, Constant, CorpusFunction, Cosine, LogReciprocal, Polynomial
from fraccalc.errors import DomainError
from fraccalc.funcspace import Grid, SbvFunction, sample
from fraccalc.norms import gagliardo_seminorm, holder_exponent, lp_norm, pairing, sbv_norm, total_variation
from fraccalc.operators import (
    derivative_result,
    marchaud_derivative,
    rl_derivative,
    rl_derivative_right,
    rl_integral,
    rl_integral_right,
    sbv_as_result,
)
from fraccalc.parallel import parallel_map
from fraccalc.types import FracParams, MeasureTestResult, OperatorResult, Side, SweepPoint, SweepReport

S_TO_ZERO = (0.5, 0.1, 0.01, 0.001)
S_TO_ONE = (0.5, 0.9, 0.99, 0.995, 0.999)
EPS_MULTIPLES = (16, 8, 4, 2, 1)
WEIERSTRASS_ORDERS = (0.25, 0.5, 0.75, 0.9)
CANTOR_EXPONENT = math.log(2.0) / math.log(3.0)
CANTOR_LIFT_ORDERS = (0.1, 0.2, 0.3)
CANTOR_DERIVATIVE_ORDERS = (0.2, 0.4)
LOG_RECIPROCAL_ORDERS = (0.3, 0.6, 0.9)

# φ ∈ {1, x, x², cos x} written relative to the left endpoint.
TEST_FUNCTIONS: tuple[CorpusFunction, ...] = (
    Constant(1.0),
    Polynomial((0.0, 1.0)),
    Polynomial((0.0, 0.0, 1.0)),
    Cosine(1.0),
)

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)
_MONOTONE_SLACK = 1e-12


def _check_orders(orders: Sequence[float], *, increasing: bool) -> list[float]:
    values = [float(s) for s in orders]
    if not values:
        msg = "sweep needs at least one order"
        raise DomainError(msg)
    for s in values:
        FracParams(s)
    steps = np.diff(values)
    if increasing and np.any(steps <= 0.0):
        msg = f"orders must be strictly increasing toward 1, got {values}"
        raise DomainError(msg)
    if not increasing and np.any(steps >= 0.0):
        msg = f"orders must be strictly decreasing toward 0, got {values}"
        raise DomainError(msg)
    return values


def is_nonincreasing(values: Sequence[float]) -> bool:
    """True when each value is at most the one before it, up to rounding."""
    return all(b <= a * (1.0 + 1e-9) + _MONOTONE_SLACK for a, b in zip(values, values[1:], strict=False))


def sweep_s_to_zero(u: SbvFunction, s_list: Sequence[float] = S_TO_ZERO, tolerance: float = 1e-2) -> SweepReport:
    """‖I^s u − u‖_{L¹} along decreasing orders; the target is 0."""
    orders = _check_orders(s_list, increasing=False)
    identity = sbv_as_result(u)

    def point(s: float) -> SweepPoint:
        value = lp_norm(rl_integral(u, FracParams(s)) - identity, 1.0).value
        logger.debug("s -> 0 sweep: s={} ||I^s u - u||_1={:.6g}", s, value)
        return SweepPoint(s, value)

    points = tuple(parallel_map(point, orders))
    return SweepReport(
        "s",
        points,
        target=0.0,
        converged=points[-1].value <= tolerance,
        tolerance=tolerance,
        functional="||I^s u - u||_L1",
    )


def sweep_s_to_one_norm(u: SbvFunction, s_list: Sequence[float] = S_TO_ONE, tolerance: float = 1e-2) -> SweepReport:
    """‖D^s u‖_{L¹} along increasing orders.

    With u(a⁺) = 0 the target is ``sbv_norm(u)`` and convergence is asserted.
    Otherwise no limit is asserted for the norm; ‖u′ − D^s u‖_{L¹} is recorded
    as the secondary series with target |u(a⁺)|.
    """
    orders = _check_orders(s_list, increasing=True)
    anchored = u.base_value == 0.0
    slope = derivative_result(u)

    def point(s: float) -> tuple[SweepPoint, SweepPoint]:
        derivative = rl_derivative(u, FracParams(s))
        value = lp_norm(derivative, 1.0).value
        gap = lp_norm(slope - derivative, 1.0).value
        logger.debug("s -> 1 sweep: s={} ||D^s u||_1={:.6g} ||u' - D^s u||_1={:.6g}", s, value, gap)
        return SweepPoint(s, value), SweepPoint(s, gap)

    pairs = parallel_map(point, orders)
    points = tuple(p for p, _ in pairs)
    target = sbv_norm(u).value if anchored else None
    converged = None
    if target is not None:
        converged = abs(points[-1].value - target) <= tolerance * max(1.0, target)
    return SweepReport(
        "s",
        points,
        target=target,
        converged=converged,
        tolerance=tolerance,
        functional="||D^s u||_L1",
        secondary=tuple(g for _, g in pairs),
        secondary_target=abs(u.base_value),
        secondary_functional="||u' - D^s u||_L1",
        extras={"total_variation": total_variation(u).value, "sbv_norm": sbv_norm(u).value},
    )


def _ac_pairing(u: SbvFunction, phi: CorpusFunction) -> float:
    """∫ u′φ with u′ the piecewise-constant slope."""
    grid = u.grid
    left = grid.nodes[:-1]
    half = 0.5 * grid.h
    x = (left + half)[:, None] + half * _GAUSS_NODES[None, :]
    cell_integrals = half * (phi.evaluate(x, grid.a, grid.b) @ _GAUSS_WEIGHTS)
    return float(u.slopes @ cell_integrals)


def weak_star_test(
    u: SbvFunction,
    s: float = 0.995,
    phis: Sequence[CorpusFunction] = TEST_FUNCTIONS,
) -> list[MeasureTestResult]:
    """Pair D^s u with each φ and compare with ∫u′φ + u(a⁺)φ(a) + Σ p_k φ(x_k).

    Raises:
        DomainError: If ``s`` is outside [0.99, 1).
    """
    if not 0.99 <= s < 1.0:
        msg = f"weak-* test order must lie in [0.99, 1), got {s}"
        raise DomainError(msg)
    grid = u.grid
    derivative = rl_derivative(u, FracParams(s))

    def test(phi: CorpusFunction) -> MeasureTestResult:
        phi.validate(grid.a, grid.b)

        def evaluate(x: np.ndarray) -> np.ndarray:
            return phi.evaluate(x, grid.a, grid.b)

        computed = pairing(derivative, evaluate)
        atoms = u.base_value * float(evaluate(np.array([grid.a]))[0])
        atoms += sum(j.height * float(evaluate(np.array([j.location]))[0]) for j in u.jumps)
        result = MeasureTestResult(phi.spec, computed, _ac_pairing(u, phi) + atoms, s)
        logger.debug("weak-* pairing against {}: {:.6g} vs {:.6g}", phi.spec, computed, result.analytic_limit)
        return result

    return parallel_map(test, list(phis))


@dataclass(frozen=True)
class IppTerms:
    """Both sides of ∫(D^s u)v = ∫(D_{b−}^s v)u + u(b)I_{b−}^{1−s}[v](b) − I^{1−s}[u](a)v(a)."""

    lhs: float
    right_pairing: float
    boundary_b: float
    boundary_a: float

    @property
    def rhs(self) -> float:
        return self.right_pairing + self.boundary_b - self.boundary_a

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def scale(self) -> float:
        return max(abs(self.lhs), abs(self.rhs), 1.0)


def ipp_terms(u: SbvFunction, v: SbvFunction, s: float) -> IppTerms:
    """Every term of the fractional integration-by-parts identity."""
    if u.grid != v.grid:
        msg = f"integration by parts needs one grid, got {u.grid} and {v.grid}"
        raise DomainError(msg)
    grid = u.grid
    params = FracParams(s)
    lhs = pairing(rl_derivative(u, params), v)
    right_pairing = pairing(rl_derivative_right(v, FracParams(s, Side.RIGHT)), u)
    complement = FracParams(1.0 - s)
    right_integral = rl_integral_right(v, FracParams(1.0 - s, Side.RIGHT))
    left_integral = rl_integral(u, complement)
    boundary_b = float(u(np.array([grid.b]))[0]) * float(right_integral.values[-1])
    boundary_a = float(left_integral.values[0]) * float(v(np.array([grid.a]))[0])
    terms = IppTerms(lhs, right_pairing, boundary_b, boundary_a)
    logger.debug("integration by parts at s={}: lhs={:.6g} rhs={:.6g}", s, terms.lhs, terms.rhs)
    return terms


def ipp_residual(u: SbvFunction, v: SbvFunction, s: float) -> float:
    """|LHS − RHS| of the integration-by-parts identity."""
    return ipp_terms(u, v, s).residual


def marchaud_eps_diagnostic(
    u: SbvFunction,
    s: float,
    eps_list: Sequence[float] | None = None,
    reference: SbvFunction | None = None,
) -> SweepReport:
    """Cauchy increments ‖D_{ε_i} u − D_{ε_{i+1}} u‖_{L¹} along decreasing ε.

    Converged when the increments and their sup over [a, a + ε_max] are both
    nonincreasing; the sup grows like ε^{−s} when u(a) ≠ 0. With a
    ``reference`` f (u = I^s f) the distance ‖D_{ε_min} u − f‖_{L¹} is kept in
    ``extras["reference_distance"]``.
    """
    grid = u.grid
    eps_values = [m * grid.h for m in EPS_MULTIPLES] if eps_list is None else [float(e) for e in eps_list]
    if len(eps_values) < 2 or np.any(np.diff(eps_values) >= 0.0):
        msg = f"eps values must be at least two, strictly decreasing, got {eps_values}"
        raise DomainError(msg)
    params = FracParams(s)
    results: list[OperatorResult] = parallel_map(lambda eps: marchaud_derivative(u, params, eps), eps_values)

    window = grid.nodes <= grid.a + eps_values[0]
    increments = []
    window_sup = []
    for eps, coarse, fine in zip(eps_values[1:], results[:-1], results[1:], strict=True):
        difference = fine - coarse
        increments.append(SweepPoint(eps, lp_norm(difference, 1.0).value))
        window_sup.append(float(np.max(np.abs(difference.regular[window]))))
    values = [p.value for p in increments]
    converged = is_nonincreasing(values) and is_nonincreasing(window_sup)
    extras: dict[str, object] = {"window_sup": window_sup}
    if reference is not None:
        extras["reference_distance"] = lp_norm(results[-1] - sbv_as_result(reference), 1.0).value
    logger.info("Marchaud eps diagnostic at s={}: increments {} converged={}", s, values, converged)
    return SweepReport(
        "eps",
        tuple(increments),
        target=0.0,
        converged=converged,
        functional="||D_eps u - D_eps' u||_L1",
        extras=extras,
    )


@dataclass(frozen=True)
class EmbeddingReport:
    lhs: float
    rhs: float
    s: float
    s_prime: float

    @property
    def ratio(self) -> float:
        """lhs/rhs, with 0/0 read as 0."""
        return 0.0 if self.rhs == 0.0 else self.lhs / self.rhs


def embedding_report(u: SbvFunction, s: float, s_prime: float) -> EmbeddingReport:
    """‖D^s u‖_{L¹} against ‖u‖_{L¹} + [u]_{s′,1}; reported, never judged.

    Raises:
        DomainError: Unless 0 < s < s′ < 1.
    """
    FracParams(s)
    if not (math.isfinite(s_prime) and s < s_prime < 1.0):
        msg = f"embedding needs s < s' < 1, got s={s}, s'={s_prime}"
        raise DomainError(msg)
    lhs = lp_norm(rl_derivative(u, FracParams(s)), 1.0).value
    rhs = lp_norm(u, 1.0).value + gagliardo_seminorm(u, s_prime, 1.0).value
    report = EmbeddingReport(lhs, rhs, s, s_prime)
    logger.info("embedding s={} s'={}: {:.6g} / {:.6g} = {:.6g}", s, s_prime, lhs, rhs, report.ratio)
    return report


def _node_sup(result: OperatorResult) -> float:
    return float(np.max(np.abs(result.values[result.node_mask()])))


def weierstrass_report(u: SbvFunction, s_list: Sequence[float] = WEIERSTRASS_ORDERS) -> SweepReport:
    """sup over the nodes of |D^s u| for a few orders; no limit is asserted."""
    orders = _check_orders(s_list, increasing=True)
    sups = parallel_map(lambda s: _node_sup(rl_derivative(u, FracParams(s))), orders)
    return SweepReport(
        "s",
        tuple(SweepPoint(s, value) for s, value in zip(orders, sups, strict=True)),
        functional="sup|D^s u|",
    )


@dataclass(frozen=True)
class CantorReport:
    level: int
    s: float
    holder_exponent: float
    sup_coarse: float
    sup_fine: float

    @property
    def sup_ratio(self) -> float:
        return self.sup_fine / self.sup_coarse if self.sup_coarse else math.inf


def cantor_report(grid: Grid, level: int = 12, s: float = 0.4) -> CantorReport:
    """Hölder exponent of the staircase and sup|D^s u| on ``grid`` and on half its cells.

    Raises:
        DomainError: If ``s`` is not below ln 2 / ln 3.
    """
    if not 0.0 < s < CANTOR_EXPONENT:
        msg = f"Cantor-Vitali derivative order must lie in (0, {CANTOR_EXPONENT:.4f}), got {s}"
        raise DomainError(msg)
    f = CantorVitali(level)
    coarse_grid = Grid(grid.a, grid.b, grid.n // 2)
    fine = sample(f, grid)
    params = FracParams(s)
    sup_coarse, sup_fine = parallel_map(
        lambda u: _node_sup(rl_derivative(u, params)),
        [sample(f, coarse_grid), fine],
    )
    return CantorReport(level, s, holder_exponent(fine).value, sup_coarse, sup_fine)


@dataclass(frozen=True)
class HolderShiftReport:
    """Hölder exponents of I^s u (``raised``) or D^s u against the shifted exponent of u."""

    base_exponent: float
    raised: bool
    orders: tuple[float, ...]
    exponents: tuple[float, ...]

    @property
    def targets(self) -> tuple[float, ...]:
        if self.raised:
            return tuple(min(self.base_exponent + s, 1.0) for s in self.orders)
        return tuple(self.base_exponent - s for s in self.orders)

    @property
    def shortfall(self) -> float:
        """Largest amount by which a measured exponent falls below its target."""
        return max(t - e for t, e in zip(self.targets, self.exponents, strict=True))

    @property
    def increasing(self) -> bool:
        return bool(np.all(np.diff(self.exponents) > 0.0))


def holder_shift_report(
    u: SbvFunction,
    s_list: Sequence[float],
    *,
    raised: bool = True,
    base_exponent: float | None = None,
) -> HolderShiftReport:
    """Hölder exponent of I^s u, or of D^s u when ``raised`` is False, for each order.

    Integration lifts C^{0,α} into C^{0,α+s}; differentiation of order s < α
    lands in C^{0,α−s}. ``base_exponent`` defaults to the measured exponent of u.

    Raises:
        DomainError: If a derivative order is not below the base exponent.
    """
    orders = _check_orders(s_list, increasing=True)
    alpha = holder_exponent(u).value if base_exponent is None else float(base_exponent)
    if not raised and orders[-1] >= alpha:
        msg = f"derivative orders must stay below the Hölder exponent {alpha:.4f}, got {orders[-1]}"
        raise DomainError(msg)
    operator: Callable[[SbvFunction, FracParams], OperatorResult] = rl_integral if raised else rl_derivative
    exponents = parallel_map(lambda s: holder_exponent(operator(u, FracParams(s))).value, orders)
    logger.debug("Hölder exponents of the order-{} images: {}", orders, exponents)
    return HolderShiftReport(alpha, raised, tuple(orders), tuple(exponents))


def cantor_holder_report(
    grid: Grid,
    level: int = 12,
    s_list: Sequence[float] = CANTOR_LIFT_ORDERS,
    *,
    raised: bool = True,
) -> HolderShiftReport:
    """:func:`holder_shift_report` for the staircase with its exact exponent ln 2 / ln 3."""
    return holder_shift_report(sample(CantorVitali(level), grid), s_list, raised=raised, base_exponent=CANTOR_EXPONENT)


@dataclass(frozen=True)
class LogReciprocalReport:
    coarse_exponent: float
    fine_exponent: float
    orders: tuple[float, ...]
    seminorms_coarse: tuple[float, ...]
    seminorms_fine: tuple[float, ...]

    @property
    def seminorm_change(self) -> float:
        """Largest relative change of [u]_{s,1} under grid doubling."""
        return max(abs(f / c - 1.0) for c, f in zip(self.seminorms_coarse, self.seminorms_fine, strict=True))


def log_reciprocal_report(grid: Grid, s_list: Sequence[float] = LOG_RECIPROCAL_ORDERS) -> LogReciprocalReport:
    """1 / ln(t/2) is in every W^{s,1} but in no C^{0,α}.

    The empirical Hölder exponent keeps dropping as the grid is refined
    (``grid`` against a quarter of its cells), while the Gagliardo
    semi-norms stay finite and settle under grid doubling.
    """
    orders = _check_orders(s_list, increasing=True)
    f = LogReciprocal()
    fine = sample(f, grid)
    half = sample(f, Grid(grid.a, grid.b, grid.n // 2))
    quarter = sample(f, Grid(grid.a, grid.b, grid.n // 4))
    seminorms_coarse = tuple(gagliardo_seminorm(half, s, 1.0).value for s in orders)
    seminorms_fine = tuple(gagliardo_seminorm(fine, s, 1.0).value for s in orders)
    report = LogReciprocalReport(
        holder_exponent(quarter).value,
        holder_exponent(fine).value,
        tuple(orders),
        seminorms_coarse,
        seminorms_fine,
    )
    logger.info(
        "log-reciprocal: Hölder {:.4f} -> {:.4f}, seminorm change {:.3g}",
        report.coarse_exponent,
        report.fine_exponent,
        report.seminorm_change,
    )
    return report
