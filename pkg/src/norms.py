"""Integrals of |g|^q for step functions, exact or as certified brackets."""
from fractions import Fraction

from .errors import InvalidParameter
from .exact import Bracket, DEFAULT_RELATIVE_WIDTH, power_bracket
from .measure_core import StepFunction


def power_integral(g: StepFunction, q, relative_width=DEFAULT_RELATIVE_WIDTH) -> Bracket:
    """
    Bracket of the integral of |g|^q for q >= 0.

    |x|^0 is read as the indicator of the support, so q = 0 gives the
    measure of {g != 0}.
    """
    q = Fraction(q)
    if q < 0:
        raise InvalidParameter("q", q, "must be non-negative")
    if q == 0:
        return Bracket.exact(g.support().measure)
    total = Bracket.exact(0)
    for interval, value in g.pieces:
        total = total + power_bracket(abs(value), q, relative_width).scale(interval.measure)
    return total


def lq_norm(g: StepFunction, q) -> Bracket:
    """The integral of |g|^q; exact whenever every |value|^q is rational."""
    q = Fraction(q)
    if q <= 0:
        raise InvalidParameter("q", q, "must be positive")
    return power_integral(g, q)
