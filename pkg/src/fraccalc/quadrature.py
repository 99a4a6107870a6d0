# this_file: src/fraccalc/quadrature.py
"""Product integration of piecewise-linear functions against (x − t)^σ.

On a uniform grid the weights only depend on the node distance ``D = j − k``,
so every rule here is a discrete convolution with dimensionless coefficients
built from the cell moments

    α_m = ∫_m^{m+1} τ^σ dτ,    β_m = ∫_m^{m+1} τ^{σ+1} dτ.

A cell whose near end sits ``m`` cells from the evaluation node gives
``(m+1)α_m − β_m`` to its near node and ``β_m − mα_m`` to its far node.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from loguru import logger
from scipy.integrate import cumulative_trapezoid

from fraccalc.errors import DomainError
from fraccalc.funcspace import Grid

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class KernelWeights:
    """Node weights for ∫_a^{x_j} ℓ[u](t)(x_j − t)^σ dt."""

    exponent: float
    node_weights: FloatArray

    def apply(self, values: npt.ArrayLike) -> float:
        """Weighted sum against the first ``j + 1`` node values."""
        arr = np.asarray(values, dtype=np.float64)[: self.node_weights.size]
        return float(self.node_weights @ arr)


def _check_sigma(sigma: float) -> None:
    if not math.isfinite(sigma) or not -1.0 < sigma < 1.0:
        msg = f"kernel exponent must lie in (-1, 1), got {sigma}"
        raise DomainError(msg)


def _power_moments(q: float, count: int) -> FloatArray:
    """∫_m^{m+1} τ^{q−1} dτ = ((m+1)^q − m^q)/q for m = 0..count−1."""
    m = np.arange(count, dtype=np.float64)
    moments = np.empty(count)
    moments[0] = 1.0 / q if q > 0.0 else np.inf
    tail = m[1:]
    # m^q (exp(q log(1 + 1/m)) − 1) keeps the difference accurate for large m.
    moments[1:] = np.power(tail, q) * np.expm1(q * np.log1p(1.0 / tail)) / q
    return moments


@lru_cache(maxsize=64)
def kernel_coefficients(count: int, sigma: float) -> tuple[FloatArray, FloatArray]:
    """Near/far cell coefficients ``(g_near, g_far)`` for distances 0..count−1.

    ``g_near[D]`` is the weight a node receives from the cell right behind it
    at distance ``D``; ``g_far[D]`` the weight from the cell in front of it.
    ``g_far[0]`` is 0. Arrays are read-only and shared between callers.
    """
    if sigma in (-1.0, -2.0):
        msg = f"kernel exponent {sigma} has a logarithmic moment"
        raise DomainError(msg)
    logger.debug("building kernel coefficients for sigma={} count={}", sigma, count)
    alpha = _power_moments(sigma + 1.0, count)
    beta = _power_moments(sigma + 2.0, count)
    m = np.arange(count, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        g_near = (m + 1.0) * alpha - beta
        g_far = np.zeros(count)
        g_far[1:] = beta[:-1] - m[:-1] * alpha[:-1]
    g_near.setflags(write=False)
    g_far.setflags(write=False)
    return g_near, g_far


@lru_cache(maxsize=64)
def cell_moments(count: int, sigma: float) -> FloatArray:
    """Read-only α_m = ∫_m^{m+1} τ^σ dτ for m = 0..count−1."""
    if sigma == -1.0:
        msg = "kernel exponent -1 has a logarithmic moment"
        raise DomainError(msg)
    if sigma == 0.0:
        alpha = np.ones(count)
    else:
        alpha = _power_moments(sigma + 1.0, count)
    alpha.setflags(write=False)
    return alpha


def product_weights(grid: Grid, j: int, sigma: float) -> KernelWeights:
    """Exact weights for the piecewise-linear interpolant on [a, x_j].

    Raises:
        DomainError: If ``j`` is not in 1..n or σ is outside (−1, 1) or zero.
    """
    _check_sigma(sigma)
    if sigma == 0.0:
        msg = "sigma = 0 is the plain trapezoid rule, use weakly_singular_integral"
        raise DomainError(msg)
    if not 1 <= j <= grid.n:
        msg = f"node index must be in 1..{grid.n}, got {j}"
        raise DomainError(msg)
    g_near, g_far = kernel_coefficients(grid.n + 1, sigma)
    distance = j - np.arange(j + 1)
    weights = np.where(distance < j, g_near[distance], 0.0) + g_far[distance]
    return KernelWeights(sigma, weights * grid.h ** (sigma + 1.0))


def singular_moment(x: float, c: float, sigma: float) -> float:
    """∫_c^x (x − t)^σ dt = (x − c)^{σ+1}/(σ + 1).

    Raises:
        DomainError: If ``c > x`` or σ is outside (−1, 1).
    """
    _check_sigma(sigma)
    if c > x:
        msg = f"singular moment needs c <= x, got c={c}, x={x}"
        raise DomainError(msg)
    if x == c:
        return 0.0
    return (x - c) ** (sigma + 1.0) / (sigma + 1.0)


def truncated_kernel_integral(grid: Grid, values: npt.ArrayLike, sigma: float, start: int = 0) -> FloatArray:
    """∫_a^{x_j − start·h} ℓ[u](t)(x_j − t)^σ dt at every node.

    With ``start >= 1`` the integrand never reaches the kernel singularity, so
    any σ except −1 and −2 is admissible (the Marchaud tail uses σ = −1 − s).
    Nodes closer than ``start`` cells to a get 0.
    """
    u = np.asarray(values, dtype=np.float64)
    if u.shape != (grid.n + 1,):
        msg = f"expected {grid.n + 1} node values, got shape {u.shape}"
        raise DomainError(msg)
    if start < 0:
        msg = f"start offset must be >= 0, got {start}"
        raise DomainError(msg)
    if start == 0:
        _check_sigma(sigma)
    count = grid.n + 1
    g_near, g_far = kernel_coefficients(count, sigma)
    distance = np.arange(count)
    near = np.where(distance >= start, g_near, 0.0)
    far = np.where(distance >= start + 1, g_far, 0.0)
    coefficients = near + far
    total = np.convolve(coefficients, u)[:count]
    # The far-end node a has no cell behind it.
    total -= near * u[0]
    return total * grid.h ** (sigma + 1.0)


def weakly_singular_integral(grid: Grid, values: npt.ArrayLike, sigma: float) -> FloatArray:
    """∫_a^{x_j} ℓ[u](t)(x_j − t)^σ dt for every node, σ ∈ (−1, 1).

    σ = 0 falls back to the cumulative trapezoid rule, which is exact for ℓ[u].
    """
    _check_sigma(sigma)
    if sigma == 0.0:
        u = np.asarray(values, dtype=np.float64)
        return cumulative_trapezoid(u, dx=grid.h, initial=0.0)
    return truncated_kernel_integral(grid, values, sigma)


def piecewise_constant_integral(grid: Grid, cell_values: npt.ArrayLike, sigma: float) -> FloatArray:
    """∫_a^{x_j} g(t)(x_j − t)^σ dt for g constant on each cell.

    ``cell_values`` holds one value per cell; the result has one per node and
    vanishes at a.
    """
    _check_sigma(sigma)
    g = np.asarray(cell_values, dtype=np.float64)
    if g.shape != (grid.n,):
        msg = f"expected {grid.n} cell values, got shape {g.shape}"
        raise DomainError(msg)
    alpha = cell_moments(grid.n, sigma)
    result = np.zeros(grid.n + 1)
    result[1:] = np.convolve(alpha, g)[: grid.n]
    return result * grid.h ** (sigma + 1.0)
