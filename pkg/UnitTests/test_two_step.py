"""
Test suite for the two-tower construction in towers.py
"""
from fractions import Fraction as F

import pytest

from src.errors import InvalidParameter, NotTwoStep, UnbalancedInput
from src.measure_core import IntervalSet, StepFunction, integral
from src.samples import two_step_function, two_step_pairs
from src.towers import build_two_step_towers


def running_values(tower, f):
    return [v for running in tower.running_sums(f)[1:] for _, v in running.restrict(tower.base).pieces]


def check_pair(pair, f, A):
    first, second = pair.towers
    assert first.union().is_disjoint(second.union())
    assert first.union().union(second.union()) == A
    for tower, expected in zip(pair.towers, pair.full_sums):
        full = tower.full_sums(f).restrict(tower.base)
        if expected == 0:
            assert full.is_zero()
        else:
            assert full == StepFunction.indicator(tower.base, expected)
        assert abs(expected) < pair.epsilon
        bound = f.sup_norm()
        assert all(abs(v) <= bound for v in running_values(tower, f))


class TestRationalRatio:
    """Test the exact-ratio case"""

    def test_equal_values(self, halves, unit):
        pair = build_two_step_towers(halves, unit, 3, F(1, 4))
        h1, h2 = pair.heights
        assert h1 == h2 and h1 > 3
        assert pair.full_sums == (0, 0)
        check_pair(pair, halves, unit)

    def test_one_against_two(self, unit):
        f = StepFunction.from_breakpoints([0, F(2, 3), 1], [1, -2])
        pair = build_two_step_towers(f, unit, 1, F(1, 4))
        check_pair(pair, f, unit)
        first, _ = pair.towers
        levels_b = sum(1 for level in first.levels if f.restrict(level).values() == [F(1)])
        levels_c = first.height - levels_b
        assert levels_b == 2 * levels_c

    def test_on_a_subset(self):
        A = IntervalSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])
        f = StepFunction.from_breakpoints([0, F(1, 4), F(1, 2), F(3, 4)], [3, 0, -3])
        pair = build_two_step_towers(f, A, 2, F(1, 2))
        check_pair(pair, f, A)

    @pytest.mark.slow
    def test_random_pairs(self, unit):
        """Test ten seeded (b, c) pairs partition [0,1) with balanced towers"""
        epsilon = F(1, 4)
        for b, c in two_step_pairs(10):
            f = two_step_function(b, c)
            pair = build_two_step_towers(f, unit, 2, epsilon)
            check_pair(pair, f, unit)
            h1, h2 = pair.heights
            assert 1 - epsilon < F(h1, h2) < 1 + epsilon


class TestConvergents:
    """Test the construction from two user-supplied convergents"""

    def test_sqrt_two_convergents(self, unit):
        """Test b = 1, c = 99/70 with convergents 3/2 and 17/12"""
        f = two_step_function(1, F(99, 70))
        pair = build_two_step_towers(f, unit, 10, F(1, 4), convergents=((3, 2), (17, 12)))
        assert pair.heights == (29, 24)
        assert pair.full_sums == (F(1, 35), F(-1, 7))
        first, second = pair.towers
        b_set = f.where(lambda v: v > 0)
        assert b_set.measure == F(99, 169)
        assert first.union().intersection(b_set).measure == F(85, 169)
        assert second.union().intersection(b_set).measure == F(14, 169)
        check_pair(pair, f, unit)

    def test_weighted_sums_cancel(self, unit):
        f = two_step_function(1, F(99, 70))
        pair = build_two_step_towers(f, unit, 10, F(1, 4), convergents=((3, 2), (17, 12)))
        total = sum(s * t.level_measure for s, t in zip(pair.full_sums, pair.towers))
        assert total == 0

    def test_defects_must_share_sign(self, unit):
        f = two_step_function(1, F(99, 70))
        with pytest.raises(InvalidParameter):
            build_two_step_towers(f, unit, 10, F(1, 4), convergents=((4, 3), (17, 12)))

    def test_heights_must_exceed_min_height(self, unit):
        f = two_step_function(1, F(99, 70))
        with pytest.raises(InvalidParameter):
            build_two_step_towers(f, unit, 40, F(1, 4), convergents=((3, 2), (17, 12)))


class TestTwoStepErrors:
    """Test input validation"""

    def test_three_values_rejected(self, four_step, unit):
        with pytest.raises(NotTwoStep):
            build_two_step_towers(four_step, unit, 1, F(1, 4))

    def test_unbalanced_rejected(self, unit):
        f = StepFunction.from_breakpoints([0, F(1, 2), 1], [2, -1])
        with pytest.raises(UnbalancedInput):
            build_two_step_towers(f, unit, 1, F(1, 4))

    def test_two_step_sample_is_mean_zero(self):
        for b, c in two_step_pairs(5, seed=7):
            assert integral(two_step_function(b, c)) == 0
