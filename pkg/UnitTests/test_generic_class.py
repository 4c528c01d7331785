"""
Test suite for generic_class.py
Tests membership, densification, openness and the forced lower bounds
"""
from fractions import Fraction as F

import pytest

from src.counterexamples import Family
from src.errors import (
    InfeasibleEpsilon,
    InvalidExponents,
    InvalidParameter,
    InvalidWitness,
    UnbalancedInput,
)
from src.generic_class import (
    core_lower_bound,
    generic_gp_generate,
    gp_densify,
    gp_membership,
    gp_openness_radius,
    openness_witness,
)
from src.growth import GrowthSequence
from src.measure_core import IntervalSet, StepFunction, integral
from src.norms import power_integral


@pytest.fixture(scope="module")
def growth():
    return GrowthSequence.factorial_two_exp()


@pytest.fixture(scope="module")
def densified(growth):
    return gp_densify(StepFunction.zero(), 1, 1, F(1, 2), growth)


class TestMembership:
    """Test the witness search over indices"""

    def test_zero_is_not_a_member(self, growth):
        verdict = gp_membership(StepFunction.zero(), 1, 1, growth, 5)
        assert not verdict.member
        assert verdict.witness is None
        assert [row.i for row in verdict.rows] == [2, 3, 4, 5]

    def test_user_table_boundary_witness(self):
        """Test a spike above a_2 on a set larger than 1/(a_2 * 4) at the first index"""
        a = GrowthSequence.from_table([2, 4, 64])
        f = StepFunction.from_breakpoints([0, F(1, 8), 1], [8, F(-8, 7)])
        assert integral(f) == 0
        verdict = gp_membership(f, 1, 1, a, 2)
        assert verdict.member
        assert verdict.witness == 2
        assert verdict.boundary_witness

    def test_bad_n(self, growth):
        with pytest.raises(InvalidParameter):
            gp_membership(StepFunction.zero(), 1, 0, growth, 3)


class TestDensify:
    """Test pushing a function into the class"""

    def test_zero_function_indices(self, densified):
        f1, audit = densified
        assert audit.i0 == 2
        assert audit.i1 == 7
        assert audit.passed
        assert power_integral(f1, 1).value == F(8, 49)

    def test_result_is_mean_zero_member(self, densified, growth):
        f1, _ = densified
        assert integral(f1) == 0
        verdict = gp_membership(f1, 1, 1, growth, 7)
        assert verdict.member
        assert verdict.witness == 7
        assert not verdict.boundary_witness

    def test_nonzero_input(self, halves, growth):
        f1, audit = gp_densify(halves, 1, 1, F(1, 2), growth)
        assert integral(f1) == 0
        assert audit.distance_p.upper < F(1, 2)
        assert len(f1.values()) == 4

    def test_errors(self, halves, growth):
        with pytest.raises(UnbalancedInput):
            gp_densify(StepFunction.indicator(IntervalSet.span(0, F(1, 2))), 1, 1, F(1, 2), growth)
        with pytest.raises(InvalidParameter):
            gp_densify(halves, 1, 1, 0, growth)
        with pytest.raises(InfeasibleEpsilon):
            gp_densify(halves, 1, 1, F(1, 100), growth)


class TestGenerate:
    """Test the packaged densification with its audit trail"""

    def test_zero_function(self, growth):
        spec = generic_gp_generate(StepFunction.zero(), 1, 1, F(1, 2), growth)
        assert spec.family is Family.GENERIC_GP
        assert spec.passed
        assert spec.parameters["i1"] == 7
        assert spec.entry("witness_row").value.i == 7
        assert spec.entry("mean_zero").value == 0
        assert power_integral(spec.function, 1).value == F(8, 49)

    def test_errors_propagate(self, growth):
        with pytest.raises(InfeasibleEpsilon):
            generic_gp_generate(StepFunction.from_breakpoints([0, F(1, 2), 1], [1, -1]),
                                1, 1, F(1, 100), growth)


class TestOpenness:
    """Test the L^p ball that stays inside the class"""

    def test_radius_is_positive(self, densified, growth):
        f1, _ = densified
        witness = openness_witness(f1, 1, 7, growth)
        assert witness.i == 7
        assert gp_openness_radius(f1, 1, witness, growth) > 0

    def test_non_member_index_rejected(self, densified, growth):
        f1, _ = densified
        with pytest.raises(InvalidWitness):
            openness_witness(f1, 1, 6, growth)


class TestCoreLowerBound:
    """Test the lower bounds forced at stage n"""

    def test_small_values(self, growth):
        assert core_lower_bound(1, 1, 2, growth, 1).to_fraction() == F(1, 256)
        assert core_lower_bound(1, 1, 2, growth, 2).to_fraction() == F(1, 8)

    @pytest.mark.parametrize("case", [1, 2])
    def test_bounds_more_than_double(self, growth, case):
        previous = core_lower_bound(1, 1, 5, growth, case)
        for n in range(6, 13):
            current = core_lower_bound(1, 1, n, growth, case)
            assert current > previous * 2
            previous = current

    def test_invalid_arguments(self, growth):
        with pytest.raises(InvalidExponents):
            core_lower_bound(3, 1, 3, growth, 1)
        with pytest.raises(InvalidParameter):
            core_lower_bound(1, 1, 1, growth, 1)
        with pytest.raises(InvalidParameter):
            core_lower_bound(1, 1, 3, growth, 3)
