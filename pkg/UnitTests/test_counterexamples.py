"""
Test suite for counterexamples.py
"""
from fractions import Fraction as F

import pytest

from src.counterexamples import (
    Family,
    kwapien_delta,
    kwapien_generate,
    log2_table,
    not_a_moment_generate,
    power_table,
)
from src.errors import (
    ExponentNotRepresentable,
    InvalidParameter,
    SummabilityViolated,
    TableTooShort,
)
from src.measure_core import integral


class TestNotAMoment:
    """Test the phi-moment family"""

    def test_log2_exponents(self):
        spec = not_a_moment_generate(log2_table(1024), 4)
        assert spec.family is Family.NOT_A_MOMENT
        assert spec.parameters["exponents"] == [3, 4, 5, 6]
        assert spec.entry("tail_mass").value == F(1, 32)
        assert integral(spec.function) == F(1, 32)
        assert spec.passed

    def test_measures_balance_heights(self):
        spec = not_a_moment_generate(log2_table(1024), 3)
        for i in range(1, 4):
            assert spec.entry(f"measure_{i}").passed
            assert spec.entry(f"phi_bound_{i}").passed

    def test_depth_zero(self):
        spec = not_a_moment_generate(log2_table(4), 0)
        assert spec.function.values() == [F(1)]
        assert spec.entry("tail_mass").value == F(1, 2)

    def test_short_table(self):
        with pytest.raises(TableTooShort):
            not_a_moment_generate(log2_table(10), 3)
        with pytest.raises(TableTooShort):
            not_a_moment_generate([], 1)

    def test_decreasing_table_rejected(self):
        with pytest.raises(InvalidParameter):
            not_a_moment_generate([(1, 2), (2, 1)], 1)


class TestKwapien:
    """Test the L^p family with no L^r transfer"""

    def test_delta(self):
        assert kwapien_delta(2, 2) == F(1, 6)

    def test_power_table(self):
        assert power_table(12, 2) == [2 ** 12, 2 ** 24]

    def test_audits_pass(self):
        spec = kwapien_generate(2, 2, power_table(12, 3), 3)
        assert spec.family is Family.KWAPIEN
        assert spec.parameters["delta"] == F(1, 6)
        assert spec.passed
        assert integral(spec.function) == 0
        for k in range(1, 4):
            assert spec.entry(f"L_{k}").value.lower >= 2 ** (6 * k)

    def test_step_values(self):
        spec = kwapien_generate(2, 2, power_table(12, 1), 1)
        assert spec.function.values() == [F(-1), F(2 ** 11)]
        assert spec.function.level_set(2 ** 11).measure == F(1, 2 ** 24)

    def test_summability_violated(self):
        with pytest.raises(SummabilityViolated):
            kwapien_generate(2, 2, [2, 4], 2)

    def test_irrational_step_value(self):
        with pytest.raises(ExponentNotRepresentable):
            kwapien_generate(2, 2, [3 * 2 ** 12], 1)

    @pytest.mark.parametrize("p, r, depth", [(1, 2, 1), (2, 1, 1), (2, 2, 0), (2, 2, 4)])
    def test_invalid_parameters(self, p, r, depth):
        with pytest.raises(InvalidParameter):
            kwapien_generate(p, r, power_table(12, 3), depth)
