"""
Test suite for measure_core.py
Tests intervals, interval sets, step functions and piecewise translations
"""
from fractions import Fraction as F

import pytest

from src.errors import (
    BranchLimitExceeded,
    DomainMismatch,
    InvalidParameter,
    NotBijective,
    PointOutsideDomain,
)
from src.measure_core import (
    Interval,
    IntervalSet,
    PiecewiseTranslation,
    StepFunction,
    apply,
    compose,
    dyadic_partition,
    integral,
    invert,
    pullback,
)


class TestInterval:
    """Test half-open intervals"""

    def test_measure_and_contains(self):
        i = Interval(F(1, 4), F(1, 2))
        assert i.measure == F(1, 4)
        assert i.contains(F(1, 4))
        assert not i.contains(F(1, 2))

    def test_rejects_empty_or_outside(self):
        with pytest.raises(InvalidParameter):
            Interval(F(1, 2), F(1, 2))
        with pytest.raises(InvalidParameter):
            Interval(F(1, 2), F(3, 2))

    def test_accepts_rational_strings(self):
        assert Interval("1/3", "2/3").measure == F(1, 3)


class TestIntervalSet:
    """Test canonical interval unions"""

    def test_adjacent_intervals_merge(self):
        s = IntervalSet([(F(1, 2), 1), (0, F(1, 4)), (F(1, 4), F(1, 2))])
        assert s == IntervalSet.unit()
        assert len(s) == 1

    def test_set_algebra(self):
        a = IntervalSet.span(0, F(1, 2))
        b = IntervalSet.span(F(1, 4), F(3, 4))
        assert a.intersection(b) == IntervalSet.span(F(1, 4), F(1, 2))
        assert a.union(b) == IntervalSet.span(0, F(3, 4))
        assert a.difference(b) == IntervalSet.span(0, F(1, 4))
        assert b.complement() == IntervalSet([(0, F(1, 4)), (F(3, 4), 1)])
        assert a.issubset(IntervalSet.unit())
        assert not a.is_disjoint(b)

    def test_contains_uses_half_open_convention(self):
        s = IntervalSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])
        assert s.contains(0)
        assert not s.contains(F(1, 4))
        assert s.contains(F(1, 2))

    def test_take_splits_by_left_endpoint(self):
        s = IntervalSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])
        head, tail = s.take(F(3, 8))
        assert head == IntervalSet([(0, F(1, 4)), (F(1, 2), F(5, 8))])
        assert tail == IntervalSet.span(F(5, 8), F(3, 4))

    def test_take_too_much_rejected(self):
        with pytest.raises(InvalidParameter):
            IntervalSet.span(0, F(1, 2)).take(1)

    def test_split_equal(self):
        pieces = IntervalSet.unit().split_equal(4)
        assert [p.measure for p in pieces] == [F(1, 4)] * 4
        assert pieces[2] == IntervalSet.span(F(1, 2), F(3, 4))

    def test_dyadic_partition(self):
        cells = dyadic_partition(2)
        assert len(cells) == 4
        assert IntervalSet(i for c in cells for i in c) == IntervalSet.unit()


class TestStepFunction:
    """Test canonical step functions"""

    def test_canonical_form_drops_zero_and_merges(self):
        f = StepFunction([((0, F(1, 4)), 1), ((F(1, 4), F(1, 2)), 1), ((F(1, 2), 1), 0)])
        assert f.pieces == ((Interval(0, F(1, 2)), F(1)),)

    def test_overlapping_pieces_rejected(self):
        with pytest.raises(InvalidParameter):
            StepFunction([((0, F(1, 2)), 1), ((F(1, 4), 1), 2)])

    def test_evaluation(self, halves):
        assert halves(F(1, 4)) == 1
        assert halves(F(1, 2)) == -1
        assert StepFunction.indicator(IntervalSet.span(0, F(1, 2)))(F(3, 4)) == 0

    def test_integral_examples(self):
        """Test the exact integrals of the worked examples"""
        halves = StepFunction.from_breakpoints([0, F(1, 2), 1], [1, -1])
        assert integral(halves) == 0
        alpha = F(2, 3)
        split = 1 / (1 + alpha)
        assert integral(StepFunction.from_breakpoints([0, split, 1], [alpha, -1])) == 0
        three = StepFunction.indicator(IntervalSet.span(0, F(1, 4)), 3)
        assert integral(three, IntervalSet.span(F(1, 8), F(1, 2))) == F(3, 8)

    def test_arithmetic(self, halves):
        assert (halves - halves).is_zero()
        assert (halves + halves) == halves.scale(2)
        assert (-halves)(0) == -1
        assert halves.abs() == StepFunction.indicator(None, 1)

    def test_parts(self, four_step):
        assert four_step.positive_part().values() == [F(2), F(3)]
        assert four_step.negative_part().values() == [F(3, 4), F(1)]
        assert four_step.sup_norm() == 3
        assert four_step.max_value() == 3

    def test_level_sets_and_atoms(self, four_step):
        assert four_step.level_set(-1) == IntervalSet.span(F(1, 8), F(3, 8))
        atoms = four_step.atoms()
        assert [value for value, _ in atoms] == [F(-1), F(-3, 4), F(2), F(3)]
        assert sum(region.measure for _, region in atoms) == 1

    def test_where_counts_zero_region(self):
        f = StepFunction.indicator(IntervalSet.span(0, F(1, 4)), 2)
        assert f.where(lambda v: v == 0) == IntervalSet.span(F(1, 4), 1)

    def test_restrict(self, halves):
        r = halves.restrict(IntervalSet.span(F(1, 4), F(3, 4)))
        assert r.support() == IntervalSet.span(F(1, 4), F(3, 4))
        assert integral(r) == 0

    def test_piece_cap(self, monkeypatch):
        """Test the branch cap from the environment applies to pieces"""
        monkeypatch.setenv("COBOUNDARY_MAX_BRANCHES", "2")
        with pytest.raises(BranchLimitExceeded):
            StepFunction.from_breakpoints([0, F(1, 3), F(2, 3), 1], [1, 2, 3])


class TestPiecewiseTranslation:
    """Test construction and the apply/compose/invert/pullback operations"""

    def test_apply_examples(self, rotation_third, swap):
        assert apply(PiecewiseTranslation.identity(), F(1, 3)) == F(1, 3)
        assert apply(rotation_third, F(5, 6)) == F(1, 6)
        assert apply(swap, F(1, 4)) == F(3, 4)

    def test_apply_outside_domain(self):
        partial = PiecewiseTranslation.identity(IntervalSet.span(0, F(1, 2)))
        with pytest.raises(PointOutsideDomain):
            partial.apply(F(3, 4))

    def test_overlapping_images_rejected(self):
        with pytest.raises(NotBijective):
            PiecewiseTranslation([((0, F(1, 2)), F(1, 4)), ((F(1, 2), 1), 0)])

    def test_image_outside_unit_rejected(self):
        with pytest.raises(InvalidParameter):
            PiecewiseTranslation([((F(1, 2), 1), F(1, 4))])

    def test_compose_examples(self, rotation_third):
        T = rotation_third
        assert compose(PiecewiseTranslation.identity(), T) == T
        assert compose(T, T) == PiecewiseTranslation.rotation(F(2, 3))
        assert compose(T, invert(T)) == PiecewiseTranslation.identity()

    def test_compose_domain_mismatch(self, swap):
        partial = PiecewiseTranslation.identity(IntervalSet.span(0, F(1, 2)))
        with pytest.raises(DomainMismatch):
            compose(partial, swap)

    def test_invert_examples(self, swap):
        assert invert(PiecewiseTranslation.identity()) == PiecewiseTranslation.identity()
        assert invert(PiecewiseTranslation.rotation(F(1, 5))) == PiecewiseTranslation.rotation(F(4, 5))
        assert invert(swap) == swap

    def test_pullback_examples(self, swap, rotation_third, halves):
        assert pullback(halves, PiecewiseTranslation.identity()) == halves
        left = StepFunction.indicator(IntervalSet.span(0, F(1, 2)))
        assert pullback(left, swap) == StepFunction.indicator(IntervalSet.span(F(1, 2), 1))
        third = StepFunction.indicator(IntervalSet.span(0, F(1, 3)))
        assert pullback(third, rotation_third) == StepFunction.indicator(IntervalSet.span(F(2, 3), 1))

    def test_pullback_needs_covering_image(self, halves):
        partial = PiecewiseTranslation.identity(IntervalSet.span(0, F(1, 2)))
        with pytest.raises(DomainMismatch):
            pullback(halves, partial)

    def test_pullback_preserves_integral(self, four_step, rotation_third):
        assert integral(pullback(four_step, rotation_third)) == integral(four_step)

    def test_matching_and_rotate_within(self):
        source = IntervalSet.span(0, F(1, 4))
        target = IntervalSet([(F(1, 2), F(5, 8)), (F(7, 8), 1)])
        M = PiecewiseTranslation.matching(source, target)
        assert M.image() == target
        assert M.apply(F(1, 8)) == F(7, 8)
        region = IntervalSet([(0, F(1, 4)), (F(1, 2), F(3, 4))])
        R = PiecewiseTranslation.rotate_within(region, F(1, 4))
        assert R.domain() == region and R.image() == region
        assert R.apply(0) == F(1, 2)
        assert R.apply(F(1, 2)) == 0

    def test_matching_rejects_unequal_measures(self):
        with pytest.raises(DomainMismatch):
            PiecewiseTranslation.matching(IntervalSet.span(0, F(1, 4)), IntervalSet.span(0, F(1, 2)))

    def test_power_and_identity(self, rotation_third):
        assert rotation_third.power(3).is_identity()
        assert rotation_third.power(-1) == PiecewiseTranslation.rotation(F(2, 3))

    def test_restrict_glue_disagreement(self, swap):
        left = swap.restrict(IntervalSet.span(0, F(1, 2)))
        right = swap.restrict(IntervalSet.span(F(1, 2), 1))
        assert left.glue(right) == swap
        assert swap.disagreement(swap).is_empty
        assert swap.disagreement(PiecewiseTranslation.identity()) == IntervalSet.unit()
        assert swap.disagreement(left) == IntervalSet.span(F(1, 2), 1)
