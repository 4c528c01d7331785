"""
Seeded random inputs for acceptance corpora.

Functions are built on a grid of 1/grid so that relative measures have
small denominators and the towers stay small.
"""
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .measure_core import PiecewiseTranslation, StepFunction, integral

DEFAULT_SEED = 20240917


def random_mean_zero(rng: np.random.Generator, max_values: int = 6, grid: int = 8,
                     max_numerator: int = 6) -> StepFunction:
    """
    Mean-zero step function with at most max_values distinct nonzero values on a 1/grid mesh.

    Values are random rationals; the last value is solved for so the
    integral is exactly zero.
    """
    pieces = int(rng.integers(2, min(max_values, grid) + 1))
    cuts = sorted(rng.choice(np.arange(1, grid), size=pieces - 1, replace=False).tolist())
    points = [Fraction(0)] + [Fraction(c, grid) for c in cuts] + [Fraction(1)]
    values = []
    for _ in range(pieces - 1):
        numerator = int(rng.integers(1, max_numerator + 1))
        denominator = int(rng.integers(1, 4))
        sign = 1 if rng.random() < 0.5 else -1
        values.append(Fraction(sign * numerator, denominator))
    partial = sum((v * (points[k + 1] - points[k]) for k, v in enumerate(values)), Fraction(0))
    last_width = points[-1] - points[-2]
    values.append(-partial / last_width)
    f = StepFunction.from_breakpoints(points, values)
    if f.is_zero():
        return StepFunction.from_breakpoints([0, Fraction(1, 2), 1], [1, -1])
    return f


def corpus(count: int, seed: int = DEFAULT_SEED, **kwargs) -> List[StepFunction]:
    rng = np.random.default_rng(seed)
    return [random_mean_zero(rng, **kwargs) for _ in range(count)]


def random_unbalanced(rng: np.random.Generator, grid: int = 8) -> StepFunction:
    """Step function with strictly positive mean."""
    while True:
        f = random_mean_zero(rng, grid=grid)
        shift = Fraction(int(rng.integers(1, 4)), 4)
        g = f + StepFunction.indicator(None, shift)
        if integral(g) > 0:
            return g


def random_rotation(rng: np.random.Generator, max_denominator: int = 12) -> PiecewiseTranslation:
    denominator = int(rng.integers(2, max_denominator + 1))
    numerator = int(rng.integers(1, denominator))
    return PiecewiseTranslation.rotation(Fraction(numerator, denominator))


def two_step_pairs(count: int, seed: int = DEFAULT_SEED) -> List[Tuple[Fraction, Fraction]]:
    """(b, c) pairs of positive rationals with small numerators."""
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        b = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
        c = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
        pairs.append((b, c))
    return pairs


def two_step_function(b, c) -> StepFunction:
    """b on [0, c/(b+c)), -c on the rest: mean zero."""
    b, c = Fraction(b), Fraction(c)
    split = c / (b + c)
    return StepFunction.from_breakpoints([0, split, 1], [b, -c])
