# this_file: tests/test_types.py
"""Tests for the shared value types."""

import math

import numpy as np
import pytest

from fraccalc.errors import DomainError
from fraccalc.funcspace import Grid, Jump
from fraccalc.types import (
    FracParams,
    MeasureTestResult,
    NormKind,
    NormValue,
    OperatorResult,
    PowerTerm,
    Side,
    SweepPoint,
    SweepReport,
)


@pytest.fixture
def grid():
    return Grid(0.0, 1.0, 16)


@pytest.mark.unit
class TestFracParams:
    """Test suite for FracParams and Side."""

    @pytest.mark.parametrize("s", [0.0, 1.0, -0.5, 1.5, math.nan, math.inf])
    def test_order_must_lie_in_unit_interval(self, s):
        """Test that s ∉ (0, 1) is rejected."""
        with pytest.raises(DomainError):
            FracParams(s)

    def test_side_accepts_strings(self):
        """Test sides given as strings."""
        assert FracParams(0.5, "RIGHT").side is Side.RIGHT

    def test_unknown_side(self):
        """Test that an unknown side is rejected."""
        with pytest.raises(DomainError):
            Side.parse("up")

    def test_flipped(self):
        """Test switching sides."""
        assert Side.LEFT.flipped() is Side.RIGHT
        assert Side.RIGHT.flipped() is Side.LEFT


@pytest.mark.unit
class TestPowerTerm:
    """Test suite for PowerTerm."""

    def test_left_term(self):
        """Test a term anchored on the left."""
        term = PowerTerm(0.25, 2.0, -0.5)
        np.testing.assert_allclose(term(np.array([0.0, 0.25, 0.5])), [0.0, 0.0, 4.0])
        assert term.is_singular

    def test_right_term(self):
        """Test a term anchored on the right."""
        term = PowerTerm(1.0, 1.0, 0.5, Side.RIGHT)
        np.testing.assert_allclose(term(np.array([0.75, 1.0])), [0.5, 0.0])

    def test_exponent_zero_left_term_is_a_step(self):
        """Test that exponent 0 is a right-continuous step."""
        step = PowerTerm(0.5, 3.0, 0.0)
        np.testing.assert_array_equal(step(np.array([0.25, 0.5, 0.75])), [0.0, 3.0, 3.0])

    def test_reflected(self, grid):
        """Test reflecting a term."""
        term = PowerTerm(0.25, 1.0, -0.5).reflected(grid)
        assert term == PowerTerm(0.75, 1.0, -0.5, Side.RIGHT)


@pytest.mark.unit
class TestOperatorResult:
    """Test suite for OperatorResult."""

    def test_shape_and_finiteness(self, grid):
        """Test shape and finiteness checks."""
        with pytest.raises(DomainError):
            OperatorResult(grid, np.zeros(grid.n))
        with pytest.raises(DomainError):
            OperatorResult(grid, np.full(grid.n + 1, np.nan))

    def test_values_skip_singular_anchor_only_in_mask(self, grid):
        """Test that only the singular anchor is masked."""
        result = OperatorResult(grid, np.zeros(grid.n + 1), (PowerTerm(0.0, 1.0, -0.5),), singular_at_a=True)
        mask = result.node_mask()
        assert not mask[0]
        assert mask[1:].all()
        assert result.values[4] == pytest.approx(0.25**-0.5)

    def test_sum_merges_matching_terms(self, grid):
        """Test that equal terms merge on addition."""
        term = PowerTerm(0.0, 1.0, -0.5)
        r = OperatorResult(grid, np.ones(grid.n + 1), (term,))
        total = r + r
        assert total.singular_terms == (PowerTerm(0.0, 2.0, -0.5),)
        np.testing.assert_array_equal(total.regular, 2.0)
        assert (r - r).singular_terms == ()

    def test_scalar_multiple(self, grid):
        """Test multiplication by a scalar."""
        r = 3.0 * OperatorResult(grid, np.ones(grid.n + 1), (PowerTerm(0.0, 1.0, 0.5),))
        assert r.singular_terms[0].coefficient == 3.0
        np.testing.assert_array_equal(r.regular, 3.0)

    def test_reflect_swaps_flags(self, grid):
        """Test that reflection swaps the singular flags."""
        r = OperatorResult(grid, grid.nodes, (PowerTerm(0.0, 1.0, -0.5),), singular_at_a=True)
        mirrored = r.reflect()
        assert mirrored.singular_at_b
        assert not mirrored.singular_at_a
        np.testing.assert_allclose(mirrored.regular, 1.0 - grid.nodes)
        back = mirrored.reflect()
        assert back.singular_terms == r.singular_terms

    def test_to_sbv_turns_steps_into_jumps(self, grid):
        """Test that step terms become jumps."""
        r = OperatorResult(grid, np.zeros(grid.n + 1), (PowerTerm(0.5, 2.0, 0.0), PowerTerm(0.0, 1.0, 0.0)))
        u = r.to_sbv()
        assert u.base_value == 1.0
        assert u.jumps == (Jump(0.5, 2.0),)

    def test_to_sbv_samples_positive_powers(self, grid):
        """Test that positive powers are sampled."""
        u = OperatorResult(grid, np.zeros(grid.n + 1), (PowerTerm(0.0, 1.0, 0.5),)).to_sbv()
        np.testing.assert_allclose(u.node_values, np.sqrt(grid.nodes))

    def test_to_sbv_rejects_unbounded_terms(self, grid):
        """Test that negative powers are rejected."""
        with pytest.raises(DomainError):
            OperatorResult(grid, np.zeros(grid.n + 1), (PowerTerm(0.0, 1.0, -0.5),)).to_sbv()


@pytest.mark.unit
class TestReports:
    """Test suite for NormValue, SweepReport and MeasureTestResult."""

    def test_norm_value_must_be_non_negative(self):
        """Test that a negative norm is rejected."""
        with pytest.raises(DomainError):
            NormValue(-1.0, NormKind.LP)
        assert float(NormValue(2.0, NormKind.TV)) == 2.0

    def test_sweep_parameters_must_be_monotone(self):
        """Test that sweep parameters must be monotone."""
        points = (SweepPoint(0.5, 1.0), SweepPoint(0.9, 1.0), SweepPoint(0.7, 1.0))
        with pytest.raises(DomainError):
            SweepReport("s", points)

    def test_sweep_parameter_name(self):
        """Test that the parameter is s or eps."""
        with pytest.raises(DomainError):
            SweepReport("h", (SweepPoint(0.5, 1.0),))

    def test_sweep_values_must_be_finite(self):
        """Test that sweep values must be finite."""
        with pytest.raises(DomainError):
            SweepReport("s", (SweepPoint(0.5, math.inf),))

    def test_sweep_accessors(self):
        """Test the report accessors."""
        report = SweepReport("eps", (SweepPoint(0.1, 3.0), SweepPoint(0.05, 2.0)), target=0.0)
        assert report.parameters == [0.1, 0.05]
        assert report.values == [3.0, 2.0]
        assert report.last == SweepPoint(0.05, 2.0)

    def test_measure_test_error(self):
        """Test the weak-* error property."""
        result = MeasureTestResult("cos:1", 0.98, 1.0, 0.995)
        assert result.error == pytest.approx(0.02)
        with pytest.raises(DomainError):
            MeasureTestResult("cos:1", math.nan, 1.0, 0.995)
