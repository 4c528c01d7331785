"""
Test suite for diagnostics.py
Tests Birkhoff sums, Schmidt statistics and D_n membership
"""
from fractions import Fraction as F

import numpy as np
import pytest

from src.diagnostics import (
    birkhoff,
    birkhoff_sums,
    dn_membership,
    schmidt_profile,
    schmidt_statistic,
)
from src.errors import DomainMismatch, InvalidParameter
from src.measure_core import IntervalSet, PiecewiseTranslation, StepFunction, pullback
from src.samples import corpus, random_unbalanced
from src.solver import Solvability, check_solvability, construct_bounded_solution


class TestBirkhoffSums:
    """Test exact sums along orbits"""

    def test_swap_alternates(self, halves, swap):
        sums = list(birkhoff_sums(halves, swap, 4))
        assert sums[0] == halves
        assert sums[1].is_zero()
        assert sums[2] == halves
        assert sums[3].is_zero()

    def test_telescoping_for_a_coboundary(self, rotation_third):
        g = StepFunction.indicator(IntervalSet.span(0, F(1, 2)), 2)
        f = g - pullback(g, rotation_third)
        for n, S in enumerate(birkhoff_sums(f, rotation_third, 6), start=1):
            assert S == g - pullback(g, rotation_third.power(n))

    def test_report(self, halves, swap):
        report = birkhoff(halves, swap, 2, thresholds=[0, 1])
        assert report.n == 2
        assert report.sum_function.is_zero()
        assert report.level_stats == ((F(0), F(1)), (F(1), F(1)))

    def test_needs_bijection(self, halves):
        partial = PiecewiseTranslation.identity(IntervalSet.span(0, F(1, 2)))
        with pytest.raises(DomainMismatch):
            list(birkhoff_sums(halves, partial, 2))

    def test_bad_n(self, halves, swap):
        with pytest.raises(InvalidParameter):
            birkhoff(halves, swap, 0)


class TestSchmidt:
    """Test the bounded-sums statistic"""

    def test_coboundary_certificate_is_bounded(self, halves, swap):
        """Test sums stay within 2|g| everywhere for f = g - g∘T"""
        assert schmidt_statistic(halves, swap, 2, 10) == 1

    def test_constructed_solution(self, alpha_step):
        certificate, _ = construct_bounded_solution(alpha_step, F(1, 4), 1)
        M = 2 * certificate.sup_bound
        statistic = schmidt_statistic(alpha_step, certificate.transformation, M, 20)
        assert statistic == 1

    def test_unbalanced_sums_escape(self, rotation_third):
        one = StepFunction.indicator(None, 1)
        assert schmidt_statistic(one, rotation_third, 3, 5) == 0
        assert schmidt_statistic(one, rotation_third, 3, 3) == 1

    @pytest.mark.slow
    @pytest.mark.integration
    def test_corpus_certificates_are_bounded(self):
        """Test every corpus certificate keeps |S_n f| <= 2|g| for n up to 50"""
        for f in corpus(20):
            certificate, _ = construct_bounded_solution(f, F(1, 4), 3)
            M = 2 * certificate.sup_bound
            statistic = schmidt_statistic(f, certificate.transformation, M, 50,
                                          within=certificate.exact_set)
            assert statistic == 1

    @pytest.mark.slow
    @pytest.mark.parametrize("alpha", [F(1, 8), F(3, 8), F(5, 8), F(7, 8), F(3, 16)])
    def test_unbalanced_statistic_decays(self, alpha):
        """Test a positive-mean f on a rotation whose orbits cross every 1/8 cell"""
        rng = np.random.default_rng(alpha.numerator * 100 + alpha.denominator)
        f = random_unbalanced(rng)
        assert check_solvability(f) is Solvability.UNBALANCED
        rotation = PiecewiseTranslation.rotation(alpha)
        assert schmidt_statistic(f, rotation, 1, 200) < F(1, 2)

    def test_profile_rows(self, halves, swap):
        rows = schmidt_profile(halves, swap, [0, 1], 3)
        assert len(rows) == 6
        assert rows[0] == (1, F(0), F(0))
        assert rows[2] == (2, F(0), F(1))

    def test_profile_within_region(self, halves, swap):
        rows = schmidt_profile(halves, swap, [0], 1, within=IntervalSet.span(0, F(1, 4)))
        assert rows == [(1, F(0), F(0))]

    def test_null_region_rejected(self, halves, swap):
        with pytest.raises(InvalidParameter):
            schmidt_profile(halves, swap, [1], 2, within=IntervalSet.empty())


class TestDnMembership:
    """Test the search for large Birkhoff sums"""

    def test_growing_sums_are_members(self):
        one = StepFunction.indicator(None, 1)
        verdict = dn_membership(one, PiecewiseTranslation.identity(), 1, F(1, 20), 10)
        assert verdict.member
        assert verdict.witness == 2
        assert verdict.exceedance == 1

    def test_bounded_sums_are_not(self, halves, swap):
        verdict = dn_membership(halves, swap, 1, F(1, 20), 12)
        assert not verdict.member
        assert verdict.witness is None
        assert verdict.searched_up_to == 12
        assert verdict.exceedance == 0

    @pytest.mark.parametrize("eta", [0, F(1, 10), F(1, 2)])
    def test_eta_range(self, halves, swap, eta):
        with pytest.raises(InvalidParameter):
            dn_membership(halves, swap, 1, eta, 5)
