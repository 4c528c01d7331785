"""
Exact scalar helpers.

All measures, endpoints and values in the package are fractions.Fraction.
This module holds the few places where exactness needs help:

    * parse_rational / format_rational: the "num/den" wire format
    * BinaryScaled: c * 2**e with rational e, for quantities like 2**(i!)
      whose size makes materializing them pointless
    * Bracket / power_bracket: certified rational enclosures of x**(a/b)
"""
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Union

from sympy import integer_nthroot

from .errors import ExponentNotRepresentable, ParseError
from .settings import get_settings

Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")

# relative width every certified bracket is refined to
DEFAULT_RELATIVE_WIDTH = Fraction(1, 10 ** 6)


def parse_rational(text) -> Fraction:
    """
    Parse "num/den" or an integer string into a Fraction.

    Floats and decimal strings are rejected so nothing inexact enters the core.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r} ({type(text).__name__})")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ParseError(f"not a rational in num/den form: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def lcm_of_denominators(values: Iterable[Scalar]) -> int:
    return reduce(math.lcm, (Fraction(v).denominator for v in values), 1)


def floor_log2(value: Fraction) -> int:
    """Largest integer t with 2**t <= value (value > 0)."""
    value = Fraction(value)
    if value <= 0:
        raise ValueError("floor_log2 needs a positive value")
    t = value.numerator.bit_length() - value.denominator.bit_length()
    # t is within one of the answer
    if Fraction(2) ** t > value:
        t -= 1
    elif Fraction(2) ** (t + 1) <= value:
        t += 1
    return t


@dataclass(frozen=True)
class Bracket:
    """A certified enclosure lower <= true value <= upper."""
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if self.lower > self.upper:
            raise ValueError(f"empty bracket [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, value):
        return cls(value, value)

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("bracket is not exact; use lower/upper")
        return self.lower

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def relative_width(self) -> Fraction:
        if self.is_exact:
            return Fraction(0)
        scale = max(abs(self.lower), abs(self.upper))
        return self.width / scale

    def __add__(self, other):
        if isinstance(other, Bracket):
            return Bracket(self.lower + other.lower, self.upper + other.upper)
        other = Fraction(other)
        return Bracket(self.lower + other, self.upper + other)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, Bracket):
            return self.scale(other)
        products = [a * b for a in (self.lower, self.upper) for b in (other.lower, other.upper)]
        return Bracket(min(products), max(products))

    __rmul__ = __mul__

    def scale(self, factor) -> "Bracket":
        factor = Fraction(factor)
        if factor < 0:
            return Bracket(self.upper * factor, self.lower * factor)
        return Bracket(self.lower * factor, self.upper * factor)

    def contains(self, value) -> bool:
        return self.lower <= Fraction(value) <= self.upper

    def __str__(self):
        if self.is_exact:
            return format_rational(self.lower)
        return f"[{format_rational(self.lower)}, {format_rational(self.upper)}]"


def exact_root(value: Fraction, n: int):
    """Return value**(1/n) as a Fraction when it is rational, else None."""
    value = Fraction(value)
    if value < 0:
        return None
    num_root, num_exact = integer_nthroot(value.numerator, n)
    den_root, den_exact = integer_nthroot(value.denominator, n)
    if num_exact and den_exact:
        return Fraction(int(num_root), int(den_root))
    return None


def _root_bracket(value: Fraction, n: int, bits: int) -> Bracket:
    # floor(value * 2**(n*bits)) has the same integer n-th root floor as value * 2**(n*bits)
    scaled = (value.numerator << (n * bits)) // value.denominator
    root, exact = integer_nthroot(scaled, n)
    root = int(root)
    lower = Fraction(root, 1 << bits)
    if exact and (value.numerator << (n * bits)) % value.denominator == 0:
        return Bracket(lower, lower)
    return Bracket(lower, Fraction(root + 1, 1 << bits))


def power_bracket(base, exponent, relative_width=DEFAULT_RELATIVE_WIDTH) -> Bracket:
    """
    Certified bracket of base**exponent for base >= 0 and rational exponent.

    Exact (lower == upper) whenever the power is rational. Otherwise the
    bracket is refined until its relative width is at most relative_width.
    """
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base < 0:
        raise ValueError("power_bracket needs a non-negative base")
    if base == 0:
        if exponent <= 0:
            raise ValueError("0 to a non-positive power")
        return Bracket.exact(0)
    a, b = exponent.numerator, exponent.denominator
    powered = base ** abs(a)
    if b == 1:
        result = Bracket.exact(powered)
    else:
        root = exact_root(powered, b)
        if root is not None:
            result = Bracket.exact(root)
        else:
            bits = get_settings().bracket_bits
            # need relative width after inversion too, so tighten by one extra factor
            while True:
                result = _root_bracket(powered, b, bits)
                if result.lower > 0 and result.width <= relative_width * result.lower / 2:
                    break
                bits *= 2
    if a < 0:
        if result.is_exact:
            return Bracket.exact(1 / result.lower)
        return Bracket(1 / result.upper, 1 / result.lower)
    return result


def exact_power(base, exponent) -> Fraction:
    """base**exponent as a Fraction, or ExponentNotRepresentable."""
    bracket = power_bracket(base, exponent)
    if not bracket.is_exact:
        raise ExponentNotRepresentable(f"{base}**({exponent}) is irrational")
    return bracket.lower


def _compare_ratio_to_power_of_two(ratio: Fraction, exponent: Fraction) -> int:
    """Sign of ratio - 2**exponent, for ratio > 0 and rational exponent."""
    num, den = ratio.numerator, ratio.denominator
    # log2(ratio) lies strictly inside (low, high)
    low = num.bit_length() - 1 - den.bit_length()
    high = num.bit_length() - den.bit_length() + 1
    if exponent <= low:
        return 1
    if exponent >= high:
        return -1
    a, b = exponent.numerator, exponent.denominator
    # ratio > 2**(a/b)  <=>  num**b > 2**a * den**b
    lhs = num ** b
    if a >= 0:
        rhs = (den ** b) << a
    else:
        lhs = lhs << (-a)
        rhs = den ** b
    return (lhs > rhs) - (lhs < rhs)


class BinaryScaled:
    """
    Exact positive number coefficient * 2**exponent with rational exponent.

    Used for growth sequences like a_i = 2**(i!) where comparing and dividing
    values must stay exact without building gigantic integers.
    """
    __slots__ = ("coefficient", "exponent")

    def __init__(self, coefficient=1, exponent=0):
        coefficient = Fraction(coefficient)
        exponent = Fraction(exponent)
        if coefficient <= 0:
            raise ValueError("BinaryScaled holds positive numbers only")
        # pull powers of two out of the coefficient so the form is canonical
        shift = 0
        num, den = coefficient.numerator, coefficient.denominator
        while num % 2 == 0:
            num //= 2
            shift += 1
        while den % 2 == 0:
            den //= 2
            shift -= 1
        self.coefficient = Fraction(num, den)
        self.exponent = exponent + shift

    @classmethod
    def of(cls, value) -> "BinaryScaled":
        if isinstance(value, BinaryScaled):
            return value
        return cls(value, 0)

    @classmethod
    def power_of_two(cls, exponent) -> "BinaryScaled":
        return cls(1, exponent)

    @property
    def is_rational(self) -> bool:
        return self.exponent.denominator == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ExponentNotRepresentable(f"2**({self.exponent}) is irrational")
        e = int(self.exponent)
        if e >= 0:
            return self.coefficient * (1 << e)
        return self.coefficient / (1 << -e)

    def log2_floor(self) -> int:
        return floor_log2(self.coefficient) + math.floor(self.exponent)

    def bracket(self, relative_width=DEFAULT_RELATIVE_WIDTH) -> Bracket:
        return power_bracket(2, self.exponent, relative_width).scale(self.coefficient)

    def __mul__(self, other):
        other = BinaryScaled.of(other)
        return BinaryScaled(self.coefficient * other.coefficient, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = BinaryScaled.of(other)
        return BinaryScaled(self.coefficient / other.coefficient, self.exponent - other.exponent)

    def __rtruediv__(self, other):
        return BinaryScaled.of(other) / self

    def __pow__(self, power):
        power = Fraction(power)
        if power.denominator == 1:
            return BinaryScaled(self.coefficient ** int(power), self.exponent * power)
        root = exact_root(self.coefficient ** abs(power.numerator), power.denominator)
        if root is None:
            raise ExponentNotRepresentable(f"({self.coefficient})**({power}) is irrational")
        if power < 0:
            root = 1 / root
        return BinaryScaled(root, self.exponent * power)

    def compare(self, other) -> int:
        if not isinstance(other, BinaryScaled):
            other = Fraction(other)
            if other <= 0:
                return 1
            other = BinaryScaled.of(other)
        ratio = self.coefficient / other.coefficient
        return _compare_ratio_to_power_of_two(ratio, other.exponent - self.exponent)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (BinaryScaled, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __hash__(self):
        return hash((self.coefficient, self.exponent))

    def __str__(self):
        if self.is_rational and abs(self.exponent) <= 64:
            return format_rational(self.to_fraction())
        if self.coefficient == 1:
            return f"2^({format_rational(self.exponent)})"
        return f"{format_rational(self.coefficient)}*2^({format_rational(self.exponent)})"

    def __repr__(self):
        return f"BinaryScaled({self.coefficient!r}, {self.exponent!r})"
