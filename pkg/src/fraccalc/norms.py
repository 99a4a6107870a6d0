# this_file: src/fraccalc/norms.py
"""L^p, total variation, SBV and Gagliardo functionals, plus a Hölder exponent estimate.

Integrals of operator results are split at every grid node and every anchor
of a closed-form term. Smooth pieces use a composite 4-point Gauss-Legendre
rule; a piece whose endpoint carries a singular term (x − x₀)^e, e < 0, is
handed to QUADPACK's algebraic-weight rule with the singular factor pulled
out, so (x − a)^{−s} and jump terms never go through a trapezoid.
"""

import math
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.integrate import quad

from fraccalc.errors import DivergenceError, DomainError
from fraccalc.funcspace import SbvFunction
from fraccalc.operators import sbv_as_result
from fraccalc.parallel import parallel_map
from fraccalc.types import NormKind, NormValue, OperatorResult, PowerTerm, Side

FloatArray = npt.NDArray[np.float64]
TestFunction = Callable[[FloatArray], FloatArray]

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)
_GAUSS2_NODES = np.array([-1.0, 1.0]) / math.sqrt(3.0)
_QUAD_LIMIT = 200
_GAGLIARDO_ROW_BLOCK = 256


def _as_result(v: OperatorResult | SbvFunction) -> OperatorResult:
    return sbv_as_result(v) if isinstance(v, SbvFunction) else v


def _bounds(result: OperatorResult, lower: float | None, upper: float | None) -> tuple[float, float]:
    lo = result.grid.a if lower is None else float(lower)
    hi = result.grid.b if upper is None else float(upper)
    if not result.grid.a <= lo < hi <= result.grid.b:
        msg = f"integration range [{lo}, {hi}] must be a subinterval of [{result.grid.a}, {result.grid.b}]"
        raise DomainError(msg)
    return lo, hi


def _breakpoints(result: OperatorResult, lo: float, hi: float) -> FloatArray:
    anchors = [t.anchor for t in result.singular_terms if lo < t.anchor < hi]
    nodes = result.grid.nodes
    inner = nodes[(nodes > lo) & (nodes < hi)]
    return np.unique(np.concatenate([[lo, hi], inner, anchors]))


def _endpoint_exponents(result: OperatorResult, lo: float, hi: float) -> tuple[float, float]:
    """Most negative exponent of the terms blowing up at ``lo`` (left) and ``hi`` (right)."""
    e_lo = min(
        (t.exponent for t in result.singular_terms if t.is_singular and t.side is Side.LEFT and t.anchor == lo),
        default=0.0,
    )
    e_hi = min(
        (t.exponent for t in result.singular_terms if t.is_singular and t.side is Side.RIGHT and t.anchor == hi),
        default=0.0,
    )
    return e_lo, e_hi


def _scaled_evaluator(result: OperatorResult, lo: float, hi: float, e_lo: float, e_hi: float) -> TestFunction:
    """x ↦ v(x)·(x − lo)^{−e_lo}·(hi − x)^{−e_hi}, finite up to both endpoints."""
    at_lo: list[PowerTerm] = []
    at_hi: list[PowerTerm] = []
    rest: list[PowerTerm] = []
    for term in result.singular_terms:
        if e_lo < 0.0 and term.side is Side.LEFT and term.anchor == lo:
            at_lo.append(term)
        elif e_hi < 0.0 and term.side is Side.RIGHT and term.anchor == hi:
            at_hi.append(term)
        else:
            rest.append(term)

    def evaluate(x: FloatArray) -> FloatArray:
        t_lo = np.maximum(x - lo, 0.0)
        t_hi = np.maximum(hi - x, 0.0)
        w_lo = np.power(t_lo, -e_lo)
        w_hi = np.power(t_hi, -e_hi)
        total = np.interp(x, result.grid.nodes, result.regular)
        for term in rest:
            total = total + term(x)
        total = total * w_lo * w_hi
        for term in at_lo:
            total = total + term.coefficient * np.power(t_lo, term.exponent - e_lo) * w_hi
        for term in at_hi:
            total = total + term.coefficient * np.power(t_hi, term.exponent - e_hi) * w_lo
        return total

    return evaluate


def _integrate(
    result: OperatorResult,
    lo: float,
    hi: float,
    transform: Callable[[FloatArray, FloatArray], FloatArray],
    power: float,
) -> float:
    """∫_lo^hi transform(v(x), x) dx where |transform| grows like |v|^power near singular anchors."""
    points = _breakpoints(result, lo, hi)
    left, right = points[:-1], points[1:]
    singular = np.zeros(left.size, dtype=bool)
    anchors = {(t.anchor, t.side) for t in result.singular_terms if t.is_singular}
    if anchors:
        for i, (x0, x1) in enumerate(zip(left, right, strict=True)):
            singular[i] = (x0, Side.LEFT) in anchors or (x1, Side.RIGHT) in anchors

    mid = 0.5 * (left[~singular] + right[~singular])
    half = 0.5 * (right[~singular] - left[~singular])
    x = mid[:, None] + half[:, None] * _GAUSS_NODES[None, :]
    total = float(np.sum(half[:, None] * _GAUSS_WEIGHTS[None, :] * transform(result(x), x)))

    for x0, x1 in zip(left[singular], right[singular], strict=True):
        e_lo, e_hi = _endpoint_exponents(result, x0, x1)
        alpha, beta = power * e_lo, power * e_hi
        if alpha <= -1.0 or beta <= -1.0:
            msg = f"integrand behaves like |x - x0|^{min(alpha, beta):g} near a singular anchor and is not integrable"
            raise DivergenceError(msg)
        scaled = _scaled_evaluator(result, x0, x1, e_lo, e_hi)

        def integrand(t: float, scaled: TestFunction = scaled) -> float:
            point = np.array([t])
            return float(transform(scaled(point), point)[0])

        value, abserr = quad(integrand, x0, x1, weight="alg", wvar=(alpha, beta), limit=_QUAD_LIMIT)
        logger.debug("algebraic-weight quad on [{}, {}]: {} (abserr {:.2e})", x0, x1, value, abserr)
        total += value
    return total


def _single_term_lp(term: PowerTerm, p: float, lo: float, hi: float) -> float:
    """∫_lo^hi |c·d(x)^e|^p dx for one term, d the distance from its anchor."""
    q = term.exponent * p + 1.0
    if q <= 0.0:
        msg = f"|x - {term.anchor}|^{term.exponent} is not in L^{p:g}"
        raise DivergenceError(msg)
    if term.side is Side.LEFT:
        d0, d1 = max(lo - term.anchor, 0.0), max(hi - term.anchor, 0.0)
    else:
        d0, d1 = max(term.anchor - hi, 0.0), max(term.anchor - lo, 0.0)
    return abs(term.coefficient) ** p * (d1**q - d0**q) / q


def lp_norm(
    v: OperatorResult | SbvFunction,
    p: float = 1.0,
    *,
    lower: float | None = None,
    upper: float | None = None,
) -> NormValue:
    """L^p norm over [lower, upper] (defaults to the whole grid interval).

    A result with no regular part and a single closed-form term is
    integrated exactly.

    Raises:
        DomainError: If ``p < 1`` or the range is not inside the grid.
        DivergenceError: If a singular term is not p-integrable.
    """
    if not (math.isfinite(p) and p >= 1.0):
        msg = f"L^p norm needs p >= 1, got {p}"
        raise DomainError(msg)
    result = _as_result(v)
    lo, hi = _bounds(result, lower, upper)
    terms = result.singular_terms
    if not np.any(result.regular):
        if not terms:
            return NormValue(0.0, NormKind.LP, p=p)
        if len(terms) == 1:
            return NormValue(_single_term_lp(terms[0], p, lo, hi) ** (1.0 / p), NormKind.LP, p=p)
    integral = _integrate(result, lo, hi, lambda values, _: np.abs(values) ** p, p)
    return NormValue(max(integral, 0.0) ** (1.0 / p), NormKind.LP, p=p)


def pairing(
    v: OperatorResult | SbvFunction,
    phi: TestFunction,
    *,
    lower: float | None = None,
    upper: float | None = None,
) -> float:
    """∫ v·φ over [lower, upper] for a bounded callable φ."""
    result = _as_result(v)
    lo, hi = _bounds(result, lower, upper)
    return _integrate(result, lo, hi, lambda values, x: values * np.asarray(phi(x), dtype=np.float64), 1.0)


def total_variation(u: SbvFunction) -> NormValue:
    """∫|u′| + Σ|p_k|."""
    variation = float(np.sum(np.abs(np.diff(u.ac_values)))) + sum(abs(j.height) for j in u.jumps)
    return NormValue(variation, NormKind.TV)


def sbv_norm(u: SbvFunction) -> NormValue:
    """|u(a⁺)| + ∫|u′| + Σ|p_k|."""
    return NormValue(abs(u.base_value) + total_variation(u).value, NormKind.SBV)


def _rect_power_integral(x1: float, x2: float, y1: float, y2: float, r: float) -> float:
    """∬_{[x1,x2]×[y1,y2]} (y − x)^r for x2 ≤ y1 and r > −2, r ≠ −1."""

    def phi(d: float) -> float:
        return math.pow(d, r + 2.0) / ((r + 1.0) * (r + 2.0))

    return phi(y2 - x1) + phi(y1 - x2) - phi(y2 - x2) - phi(y1 - x1)


def _gagliardo_rows(
    start: int,
    stop: int,
    left: FloatArray,
    width: FloatArray,
    value_left: FloatArray,
    slope: FloatArray,
    jump_after: FloatArray,
    s: float,
    p: float,
) -> float:
    """Off-diagonal sum over cell pairs (i, k), start ≤ i < stop, k > i."""
    sigma = s * p
    r_smooth = p - 1.0 - sigma
    count = left.size
    gauss_x = 0.5 * width[:, None] * (1.0 + _GAUSS2_NODES[None, :]) + left[:, None]
    gauss_u = value_left[:, None] + slope[:, None] * (gauss_x - left[:, None])
    gauss_w = 0.5 * width[:, None] * np.ones(2)[None, :]
    total = 0.0
    for i in range(start, stop):
        k0 = i + 1
        if k0 >= count:
            break
        xs, us, ws = gauss_x[i], gauss_u[i], gauss_w[i]
        ys, vs, wy = gauss_x[k0:], gauss_u[k0:], gauss_w[k0:]
        diff = np.abs(vs[:, :, None] - us[None, None, :]) ** p
        dist = ys[:, :, None] - xs[None, None, :]
        weights = wy[:, :, None] * ws[None, None, :]
        pair = np.sum(weights * diff * dist ** (-1.0 - sigma), axis=(1, 2))

        # Adjacent cell: the kernel is singular at the shared corner.
        jump = jump_after[i]
        if jump != 0.0:
            rect = _rect_power_integral(left[i], left[k0], left[k0], left[k0] + width[k0], -1.0 - sigma)
            correction = np.sum(weights[0] * (diff[0] - abs(jump) ** p) * dist[0] ** (-1.0 - sigma))
            pair[0] = abs(jump) ** p * rect + correction
        else:
            mean_slope = 0.5 * (slope[i] + slope[k0])
            rect = _rect_power_integral(left[i], left[k0], left[k0], left[k0] + width[k0], r_smooth)
            pair[0] = abs(mean_slope) ** p * rect
        total += float(np.sum(pair))
    return total


def gagliardo_seminorm(u: SbvFunction, s: float, p: float = 1.0) -> NormValue:
    """(∬ |u(x) − u(y)|^p / |x − y|^{1+sp} dx dy)^{1/p} over [a, b]².

    Cells are split at jump locations so ``u`` is linear on every cell.
    Diagonal cells and adjacent pairs are integrated in closed form (a jump
    between adjacent cells gets its exact rectangle kernel plus a Gauss
    correction for the linear parts); all other pairs use the 2×2 Gauss rule.

    Raises:
        DomainError: If s ∉ (0, 1) or p < 1.
        DivergenceError: If ``u`` has a jump and s·p ≥ 1.
    """
    if not (math.isfinite(s) and 0.0 < s < 1.0):
        msg = f"Gagliardo order must lie in (0, 1), got {s}"
        raise DomainError(msg)
    if not (math.isfinite(p) and p >= 1.0):
        msg = f"Gagliardo exponent needs p >= 1, got {p}"
        raise DomainError(msg)
    if u.has_jumps and s * p >= 1.0:
        msg = f"a function with jumps has infinite Gagliardo semi-norm for s*p = {s * p:g} >= 1"
        raise DivergenceError(msg)

    grid = u.grid
    locations = np.array([j.location for j in u.jumps])
    edges = np.union1d(grid.nodes, locations)
    left, width = edges[:-1], np.diff(edges)
    continuous = u.continuous_values
    ac_left = np.interp(left, grid.nodes, continuous)
    ac_right = np.interp(edges[1:], grid.nodes, continuous)
    # Cells left of a jump location sit in front of it, so x_k ≤ left selects the jumps already applied.
    value_left = ac_left + u.jump_part(left)
    slope = (ac_right - ac_left) / width
    jump_after = np.zeros(left.size)
    for jump in u.jumps:
        jump_after[np.searchsorted(edges, jump.location) - 1] = jump.height

    r_smooth = p - 1.0 - s * p
    # ∬ over a square of side L of |x − y|^r is 2L^{r+2}/((r+1)(r+2)).
    square = 2.0 * width ** (r_smooth + 2.0) / ((r_smooth + 1.0) * (r_smooth + 2.0))
    diagonal = float(np.sum(np.abs(slope) ** p * square))
    starts = range(0, left.size, _GAGLIARDO_ROW_BLOCK)
    blocks = [(start, min(start + _GAGLIARDO_ROW_BLOCK, left.size)) for start in starts]
    partial = parallel_map(
        lambda block: _gagliardo_rows(*block, left, width, value_left, slope, jump_after, s, p),
        blocks,
    )
    integral = diagonal + 2.0 * sum(partial)
    logger.debug("Gagliardo integral for s={} p={} over {} cells: {}", s, p, left.size, integral)
    return NormValue(max(integral, 0.0) ** (1.0 / p), NormKind.GAGLIARDO, p=p, s=s)


def holder_exponent(v: SbvFunction | OperatorResult) -> NormValue:
    """Empirical Hölder exponent from the modulus of continuity on the nodes.

    Fits log max_{|i−j|=d}|v_i − v_j| against log(d·h) for d = 1, 2, 4, …, n/8
    and clips the slope to [0, 1]. A constant input returns 1.
    """
    if isinstance(v, SbvFunction):
        values, grid = v.node_values, v.grid
    else:
        # Dropping singular end nodes keeps the remaining nodes contiguous.
        values, grid = v.values[v.node_mask()], v.grid
    separations = []
    moduli = []
    d = 1
    while d <= max(grid.n // 8, 1) and d < values.size:
        modulus = float(np.max(np.abs(values[d:] - values[:-d])))
        if modulus > 0.0:
            separations.append(d * grid.h)
            moduli.append(modulus)
        d *= 2
    if len(moduli) < 2:
        return NormValue(1.0, NormKind.HOLDER)
    slope = float(np.polyfit(np.log(separations), np.log(moduli), 1)[0])
    return NormValue(min(max(slope, 0.0), 1.0), NormKind.HOLDER)
