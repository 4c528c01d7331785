import sys
import os
from fractions import Fraction

import pytest

# Adding the project root directory to sys.path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, project_root)

from src.measure_core import IntervalSet, PiecewiseTranslation, StepFunction  # noqa: E402


F = Fraction


@pytest.fixture
def halves():
    """+1 on [0,1/2), -1 on [1/2,1)"""
    return StepFunction.from_breakpoints([0, F(1, 2), 1], [1, -1])


@pytest.fixture
def alpha_step():
    """2/3 on [0,3/5), -1 on [3/5,1): mean zero"""
    return StepFunction.from_breakpoints([0, F(3, 5), 1], [F(2, 3), -1])


@pytest.fixture
def four_step():
    """Mean-zero step function with four values on an eighth grid"""
    return StepFunction.from_breakpoints(
        [0, F(1, 8), F(3, 8), F(1, 2), 1], [2, -1, 3, F(-3, 4)])


@pytest.fixture
def rotation_third():
    return PiecewiseTranslation.rotation(F(1, 3))


@pytest.fixture
def swap():
    return PiecewiseTranslation.swap_halves()


@pytest.fixture
def unit():
    return IntervalSet.unit()
