# this_file: tests/test_limits.py
"""Tests for the s → 0, s → 1 and ε → 0 experiments."""

import math

import numpy as np
import pytest

from fraccalc.corpus import Constant, Cosine, Heaviside, Power, Weierstrass
from fraccalc.errors import DomainError
from fraccalc.funcspace import Grid, sample
from fraccalc.limits import (
    CANTOR_DERIVATIVE_ORDERS,
    CANTOR_EXPONENT,
    TEST_FUNCTIONS,
    HolderShiftReport,
    LogReciprocalReport,
    cantor_holder_report,
    cantor_report,
    embedding_report,
    holder_shift_report,
    ipp_residual,
    ipp_terms,
    is_nonincreasing,
    log_reciprocal_report,
    marchaud_eps_diagnostic,
    sweep_s_to_one_norm,
    sweep_s_to_zero,
    weak_star_test,
    weierstrass_report,
)
from fraccalc.operators import rl_integral
from fraccalc.types import FracParams


@pytest.fixture
def grid():
    return Grid(0.0, 1.0, 256)


@pytest.mark.unit
class TestIsNonincreasing:
    """Test suite for is_nonincreasing."""

    def test_values(self):
        """Test plain monotone and non-monotone sequences."""
        assert is_nonincreasing([3.0, 2.0, 2.0, 1.0])
        assert is_nonincreasing([1.0])
        assert not is_nonincreasing([1.0, 2.0])

    def test_rounding_slack(self):
        """Test that a rounding-size increase is tolerated."""
        assert is_nonincreasing([1.0, 1.0 + 1e-12])


@pytest.mark.integration
class TestSToZero:
    """Test suite for sweep_s_to_zero."""

    @pytest.mark.parametrize("spec", [Power(1.0), Heaviside(0.5)])
    def test_converges_to_identity(self, grid, spec):
        """Test that I^s u approaches u."""
        report = sweep_s_to_zero(sample(spec, grid))
        assert report.parameter_name == "s"
        assert report.target == 0.0
        assert report.converged
        assert report.values[-1] < report.values[0]

    @pytest.mark.parametrize("spec", [Power(1.0), Heaviside(0.5), Cosine(3.0)])
    def test_smallest_order_gives_the_minimum(self, grid, spec):
        """Test that the last sweep value is the smallest of the sweep."""
        values = sweep_s_to_zero(sample(spec, grid)).values
        assert values[-1] == min(values)

    def test_orders_must_decrease(self, grid):
        """Test that an increasing order list is rejected."""
        with pytest.raises(DomainError):
            sweep_s_to_zero(sample(Power(1.0), grid), (0.1, 0.5))

    def test_orders_must_be_valid(self, grid):
        """Test that s = 0 is rejected."""
        with pytest.raises(DomainError):
            sweep_s_to_zero(sample(Power(1.0), grid), (0.5, 0.0))

    def test_points_log_at_debug(self, grid, mocker):
        """Test that sweep points are logged at DEBUG and never at INFO."""
        log = mocker.patch("fraccalc.limits.logger")
        sweep_s_to_zero(sample(Power(1.0), grid), (0.5, 0.1))
        assert log.debug.call_count == 2
        log.info.assert_not_called()


@pytest.mark.integration
class TestSToOne:
    """Test suite for sweep_s_to_one_norm."""

    def test_anchored_function_reaches_sbv_norm(self, grid):
        """Test ‖D^s x‖₁ → ‖x‖_SBV."""
        report = sweep_s_to_one_norm(sample(Power(1.0), grid))
        assert report.target == pytest.approx(1.0)
        assert report.converged
        assert report.extras["total_variation"] == pytest.approx(1.0)

    def test_jump_reaches_total_variation(self, grid):
        """Test ‖D^s χ‖₁ → TV(χ)."""
        report = sweep_s_to_one_norm(sample(Heaviside(0.25), grid), (0.5, 0.9, 0.99, 0.999))
        assert report.last.value == pytest.approx(1.0, abs=1e-2)
        assert report.converged

    def test_heaviside_closed_form_at_every_order(self, grid):
        """‖D^s χ_[1/4,1]‖₁ = 0.75^{1−s}/Γ(2 − s) along the whole sweep."""
        report = sweep_s_to_one_norm(sample(Heaviside(0.25), grid))
        for point in report.points:
            s = point.parameter
            assert point.value == pytest.approx(0.75 ** (1.0 - s) / math.gamma(2.0 - s), rel=1e-8)

    def test_constant_anomaly(self, grid):
        """‖D^s 1‖₁ → 1 although u′ = 0; no limit is asserted for the norm itself."""
        report = sweep_s_to_one_norm(sample(Constant(1.0), grid))
        assert report.target is None
        assert report.converged is None
        assert report.secondary_target == 1.0
        assert report.secondary[-1].value == pytest.approx(1.0, abs=1e-2)
        assert report.extras["sbv_norm"] == 1.0

    def test_orders_must_increase(self, grid):
        """Test that a decreasing order list is rejected."""
        with pytest.raises(DomainError):
            sweep_s_to_one_norm(sample(Power(1.0), grid), (0.9, 0.5))


@pytest.mark.integration
class TestWeakStar:
    """Test suite for weak_star_test."""

    def test_heaviside_pairings(self, grid):
        """Test every pairing against its limit at the default order."""
        results = weak_star_test(sample(Heaviside(0.5), grid))
        assert [r.test_function for r in results] == [phi.spec for phi in TEST_FUNCTIONS]
        assert all(r.s_used == 0.995 for r in results)
        assert max(r.error for r in results) < 2e-2

    def test_error_shrinks_as_order_grows(self):
        """Test that the worst pairing error decreases from s = 0.99 to s = 0.999."""
        u = sample(Heaviside(0.5), Grid(0.0, 1.0, 1024))
        errors = [max(r.error for r in weak_star_test(u, s)) for s in (0.99, 0.995, 0.999)]
        assert errors[0] > errors[1] > errors[2]

    def test_limit_includes_base_atom(self, grid):
        """Test that u(a⁺) contributes an atom at a."""
        results = weak_star_test(sample(Constant(1.0), grid), 0.999)
        # ∫ u′φ vanishes, leaving u(a⁺)φ(a) = 1 for φ = 1.
        assert results[0].analytic_limit == pytest.approx(1.0)

    def test_order_range(self, grid):
        """Test that orders below 0.99 are rejected."""
        with pytest.raises(DomainError):
            weak_star_test(sample(Heaviside(0.5), grid), 0.9)


@pytest.mark.integration
class TestIntegrationByParts:
    """Test suite for ipp_terms and ipp_residual."""

    def test_smooth_pair(self, grid):
        """Test a pair whose boundary terms vanish."""
        terms = ipp_terms(sample(Power(2.0), grid), sample(Cosine(1.0), grid), 0.5)
        assert terms.boundary_a == pytest.approx(0.0, abs=1e-12)
        assert terms.boundary_b == pytest.approx(0.0, abs=1e-12)
        assert terms.residual / terms.scale < 1e-2

    def test_reflected_pair_balances_exactly(self, grid):
        """Test that v(t) = u(a + b − t) mirrors both sides of the identity."""
        u = sample(Power(2.0), grid)
        assert ipp_residual(u, u.reflect(), 0.5) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("s", [0.3, 0.6])
    def test_residual_order(self, s):
        """The residual falls like h^{2−s}, the rate of the piecewise-constant slope rule."""
        residuals = [
            ipp_residual(sample(Power(1.0), g), sample(Cosine(1.0), g), s)
            for g in (Grid(0.0, 1.0, 128), Grid(0.0, 1.0, 512))
        ]
        order = math.log2(residuals[0] / residuals[1]) / 2.0
        assert order >= (2.0 - s) - 0.15

    def test_residual_shortcut(self, grid):
        """Test that ipp_residual matches ipp_terms."""
        u, v = sample(Power(1.0), grid), sample(Power(2.0), grid)
        assert ipp_residual(u, v, 0.3) == ipp_terms(u, v, 0.3).residual

    def test_grids_must_match(self, grid):
        """Test that functions on different grids are rejected."""
        with pytest.raises(DomainError):
            ipp_terms(sample(Power(1.0), grid), sample(Power(1.0), Grid(0.0, 1.0, 64)), 0.5)


@pytest.mark.integration
class TestMarchaudDiagnostic:
    """Test suite for marchaud_eps_diagnostic."""

    def test_anchored_function_converges(self, grid):
        """Test that increments shrink for u(a) = 0."""
        report = marchaud_eps_diagnostic(sample(Power(1.0), grid), 0.5)
        assert report.parameter_name == "eps"
        assert report.converged
        assert len(report.points) == 4

    def test_nonzero_base_is_flagged(self, grid):
        """Test that the window sup grows when u(a) ≠ 0."""
        report = marchaud_eps_diagnostic(sample(Constant(1.0), grid), 0.5)
        assert not report.converged
        window = report.extras["window_sup"]
        assert window[-1] > window[0]

    def test_reference_distance(self, grid):
        """Test that the Marchaud derivative of I^s f recovers f."""
        f = sample(Power(1.0), grid)
        u = rl_integral(f, FracParams(0.5)).to_sbv()
        report = marchaud_eps_diagnostic(u, 0.5, reference=f)
        assert report.extras["reference_distance"] < 5e-2

    def test_eps_must_decrease(self, grid):
        """Test that an increasing ε list is rejected."""
        with pytest.raises(DomainError):
            marchaud_eps_diagnostic(sample(Power(1.0), grid), 0.5, [grid.h, 2 * grid.h])


@pytest.mark.integration
class TestReports:
    """Test suite for the report-only experiments."""

    def test_embedding_ratio(self, grid):
        """Test that the embedding ratio is finite and positive."""
        report = embedding_report(sample(Power(1.0), grid), 0.3, 0.6)
        assert report.rhs > 0.0
        assert 0.0 < report.ratio < math.inf

    def test_embedding_zero_over_zero(self, grid):
        """Test that 0/0 reads as 0."""
        assert embedding_report(sample(Power(1.0), grid) * 0.0, 0.3, 0.6).ratio == 0.0

    def test_embedding_order(self, grid):
        """Test that s′ must exceed s."""
        with pytest.raises(DomainError):
            embedding_report(sample(Power(1.0), grid), 0.6, 0.3)

    def test_weierstrass(self, grid):
        """Test that D^s W stays finite with no limit asserted."""
        report = weierstrass_report(sample(Weierstrass(), grid))
        assert report.converged is None
        assert all(np.isfinite(report.values))

    def test_cantor_order_bound(self, grid):
        """Test that s must stay below ln 2 / ln 3."""
        with pytest.raises(DomainError):
            cantor_report(grid, 8, CANTOR_EXPONENT)

    @pytest.mark.slow
    def test_cantor(self):
        """Test the staircase exponent and the sup ratio."""
        report = cantor_report(Grid(0.0, 1.0, 2 * 3**6), level=6, s=0.4)
        assert report.holder_exponent == pytest.approx(CANTOR_EXPONENT, abs=0.1)
        assert math.isfinite(report.sup_ratio)


@pytest.mark.unit
class TestHolderShiftReport:
    """Test suite for HolderShiftReport."""

    def test_raised_targets_are_capped_at_one(self):
        """Test α + s targets, capped at Lipschitz."""
        report = HolderShiftReport(0.6, True, (0.2, 0.5), (0.75, 0.95))
        assert report.targets == pytest.approx((0.8, 1.0))
        assert report.shortfall == pytest.approx(0.05)
        assert report.increasing

    def test_lowered_targets(self):
        """Test α − s targets for derivatives."""
        report = HolderShiftReport(0.6, False, (0.2, 0.4), (0.45, 0.3))
        assert report.targets == pytest.approx((0.4, 0.2))
        assert report.shortfall == pytest.approx(-0.05)
        assert not report.increasing


@pytest.mark.integration
class TestHolderShift:
    """Test suite for holder_shift_report and cantor_holder_report."""

    def test_integral_of_a_step(self, grid):
        """I^s χ is Hölder of order s exactly."""
        report = holder_shift_report(sample(Heaviside(0.5), grid), (0.3, 0.6))
        assert report.base_exponent == pytest.approx(0.0)
        assert report.shortfall <= 0.1
        assert report.increasing

    def test_derivative_order_must_stay_below_exponent(self, grid):
        """Test that D^s needs s below the Hölder exponent of u."""
        with pytest.raises(DomainError):
            holder_shift_report(sample(Power(0.5), grid), (0.2, 0.6), raised=False)

    def test_explicit_base_exponent(self, grid):
        """Test that a given exponent replaces the measured one."""
        report = cantor_holder_report(grid, 5, (0.1, 0.2))
        assert report.base_exponent == CANTOR_EXPONENT
        assert len(report.exponents) == 2

    @pytest.mark.slow
    def test_cantor_lift(self):
        """I^s lifts the staircase from C^{0,α} toward C^{0,α+s}."""
        report = cantor_holder_report(Grid(0.0, 1.0, 4096))
        assert report.increasing
        assert report.shortfall <= 0.15

    @pytest.mark.slow
    def test_cantor_derivative(self):
        """D^s of the staircase keeps an exponent of at least α − s."""
        report = cantor_holder_report(Grid(0.0, 1.0, 4096), s_list=CANTOR_DERIVATIVE_ORDERS, raised=False)
        assert report.shortfall <= 0.05


@pytest.mark.integration
class TestLogReciprocal:
    """Test suite for log_reciprocal_report."""

    def test_seminorm_change(self):
        """Test the largest relative change under grid doubling."""
        report = LogReciprocalReport(0.3, 0.2, (0.3, 0.6), (1.0, 4.0), (1.02, 3.9))
        assert report.seminorm_change == pytest.approx(0.025)

    def test_not_holder_but_sobolev(self):
        """The exponent drops under refinement while [u]_{s,1} settles."""
        report = log_reciprocal_report(Grid(0.0, 1.0, 1024))
        assert report.fine_exponent < report.coarse_exponent
        assert report.fine_exponent < 0.5
        assert all(math.isfinite(v) and v > 0.0 for v in report.seminorms_fine)
        assert report.seminorm_change <= 0.05
