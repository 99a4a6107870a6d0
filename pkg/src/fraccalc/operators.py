# this_file: src/fraccalc/operators.py
"""Riemann-Liouville, Marchaud and Caputo operators on SBV functions.

Every left operator splits its input into ``base_value + AC part + jumps``.
The AC part goes through product quadrature; the base value and the jumps
enter through their exact closed forms as :class:`PowerTerm` entries of the
result. Right-sided operators reflect the input under t ↦ a + b − t, apply
the left operator and reflect the output back.
"""

import math

import numpy as np
from loguru import logger

from fraccalc.errors import DomainError
from fraccalc.funcspace import SbvFunction
from fraccalc.quadrature import piecewise_constant_integral, truncated_kernel_integral, weakly_singular_integral
from fraccalc.special import gamma
from fraccalc.types import FracParams, OperatorResult, PowerTerm, Side

# Relative slack when snapping eps to a multiple of the grid spacing.
_EPS_ALIGN_TOLERANCE = 1e-6


def _check_order(order: float) -> float:
    if not (math.isfinite(order) and 0.0 < order < 1.0):
        msg = f"integration order must lie in (0, 1), got {order}"
        raise DomainError(msg)
    return float(order)


def _atom_terms(u: SbvFunction, coefficient_scale: float, exponent: float) -> list[PowerTerm]:
    """Closed-form terms for the base value (anchored at a) and every jump."""
    terms = []
    if u.base_value != 0.0:
        terms.append(PowerTerm(u.grid.a, u.base_value * coefficient_scale, exponent))
    terms.extend(PowerTerm(j.location, j.height * coefficient_scale, exponent) for j in u.jumps)
    return terms


def _left_integral(u: SbvFunction, order: float) -> OperatorResult:
    regular = weakly_singular_integral(u.grid, u.ac_values, order - 1.0) / float(gamma(order))
    terms = _atom_terms(u, 1.0 / float(gamma(order + 1.0)), order)
    return OperatorResult(u.grid, regular, tuple(terms), label=f"I^{order:g}")


def _left_derivative(u: SbvFunction, s: float, *, with_base: bool = True) -> OperatorResult:
    regular = piecewise_constant_integral(u.grid, u.slopes, -s) / float(gamma(1.0 - s))
    atoms = u if with_base else SbvFunction(u.grid, u.ac_values, u.jumps, 0.0)
    terms = _atom_terms(atoms, 1.0 / float(gamma(1.0 - s)), -s)
    singular_at_a = with_base and u.base_value != 0.0
    return OperatorResult(u.grid, regular, tuple(terms), singular_at_a=singular_at_a, label=f"D^{s:g}")


def rl_integral(u: SbvFunction, params: FracParams, order: float | None = None) -> OperatorResult:
    """Riemann-Liouville integral I^ν with ν = ``order`` (defaults to ``params.s``).

    Raises:
        DomainError: If ν is outside (0, 1).
    """
    nu = _check_order(params.s if order is None else order)
    if params.side is Side.RIGHT:
        return rl_integral_right(u, params, nu)
    logger.debug("left RL integral of order {} on {} cells", nu, u.grid.n)
    return _left_integral(u, nu)


def rl_integral_right(u: SbvFunction, params: FracParams, order: float | None = None) -> OperatorResult:
    """Right-sided integral I_{b−}^ν, by reflection."""
    nu = _check_order(params.s if order is None else order)
    logger.debug("right RL integral of order {} on {} cells", nu, u.grid.n)
    return _left_integral(u.reflect(), nu).reflect()


def rl_derivative(u: SbvFunction, params: FracParams) -> OperatorResult:
    """Riemann-Liouville derivative D^s in its W^{1,1} form.

    ``u(a⁺)(x−a)^{−s}/Γ(1−s) + I^{1−s}[u′](x) + Σ p_k (x−x_k)^{−s}/Γ(1−s)``, where
    the jump terms act strictly to the right of x_k.
    """
    if params.side is Side.RIGHT:
        return rl_derivative_right(u, params)
    logger.debug("left RL derivative of order {} on {} cells", params.s, u.grid.n)
    return _left_derivative(u, params.s)


def rl_derivative_right(u: SbvFunction, params: FracParams) -> OperatorResult:
    """Right-sided derivative D_{b−}^s, by reflection."""
    logger.debug("right RL derivative of order {} on {} cells", params.s, u.grid.n)
    return _left_derivative(u.reflect(), params.s).reflect()


def caputo_derivative(u: SbvFunction, params: FracParams) -> OperatorResult:
    """Caputo derivative I^{1−s}[u′] for functions without jumps.

    Raises:
        DomainError: If ``u`` has jumps.
    """
    if u.has_jumps:
        msg = f"Caputo derivative needs an absolutely continuous function, got {len(u.jumps)} jump(s)"
        raise DomainError(msg)
    logger.debug("{} Caputo derivative of order {}", params.side.value, params.s)
    if params.side is Side.RIGHT:
        return _left_derivative(u.reflect(), params.s, with_base=False).reflect()
    return _left_derivative(u, params.s, with_base=False)


def eps_cells(u: SbvFunction, eps: float) -> int:
    """Number of cells ``m`` with ``eps = m·h``.

    Raises:
        DomainError: If ``eps`` is not positive or shorter than one cell.
    """
    if not (math.isfinite(eps) and eps > 0.0):
        msg = f"Marchaud truncation eps must be > 0, got {eps}"
        raise DomainError(msg)
    h = u.grid.h
    m = round(eps / h)
    if m < 1:
        msg = f"Marchaud truncation eps={eps} is below the grid spacing {h}"
        raise DomainError(msg)
    if abs(m * h - eps) > _EPS_ALIGN_TOLERANCE * eps:
        logger.debug("snapping eps={} to {} grid cells", eps, m)
    return m


def _left_marchaud(u: SbvFunction, s: float, m: int) -> OperatorResult:
    grid = u.grid
    eps = m * grid.h
    scale = 1.0 / float(gamma(1.0 - s))
    tail = truncated_kernel_integral(grid, u.ac_values, -1.0 - s, start=m)
    # For x < a + eps the zero extension gives u(x)/(Γ(1−s)eps^s); the tail is 0 there.
    regular = (u.ac_values * eps**-s - s * tail) * scale
    nodes = grid.nodes
    atoms = [(grid.a, u.base_value)] if u.base_value != 0.0 else []
    atoms.extend((j.location, j.height) for j in u.jumps)
    for location, height in atoms:
        distance = np.maximum(nodes - location, eps)
        regular = regular + np.where(nodes >= location, height * scale * distance**-s, 0.0)
    return OperatorResult(grid, regular, singular_at_a=True, label=f"D_eps^{s:g}")


def marchaud_derivative(u: SbvFunction, params: FracParams, eps: float) -> OperatorResult:
    """ε-truncated Marchaud derivative.

    ``D_ε u(x) = u(x)/(Γ(1−s)(x−a)^s) + (s/Γ(1−s)) ∫_a^{x−ε} (u(x)−u(t))/(x−t)^{1+s} dt``
    for x ≥ a + ε, and u(x)/(Γ(1−s)ε^s) below a + ε (u continued by zero left
    of a). ``eps`` is snapped to a whole number of cells. Node 0 carries the
    right limit and is flagged as singular, the derivative being undefined at a.
    """
    m = eps_cells(u, eps)
    logger.debug("{} Marchaud derivative of order {} with eps={} cells", params.side.value, params.s, m)
    if params.side is Side.RIGHT:
        return _left_marchaud(u.reflect(), params.s, m).reflect()
    return _left_marchaud(u, params.s, m)


def derivative_result(u: SbvFunction) -> OperatorResult:
    """Classical derivative of the AC part, as node averages of the cell slopes."""
    slopes = u.slopes
    regular = np.empty(u.grid.n + 1)
    regular[0] = slopes[0]
    regular[-1] = slopes[-1]
    regular[1:-1] = 0.5 * (slopes[:-1] + slopes[1:])
    return OperatorResult(u.grid, regular, label="u'")


def sbv_as_result(u: SbvFunction) -> OperatorResult:
    """View an SbvFunction as an operator result; jumps become exponent-0 terms."""
    terms = tuple(PowerTerm(j.location, j.height, 0.0) for j in u.jumps)
    return OperatorResult(u.grid, u.continuous_values, terms, label="u")
