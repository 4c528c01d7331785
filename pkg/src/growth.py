"""
Growth sequences a_1 < a_2 < ... used by the generic-class machinery.

The default family a_i = 2^(i!) grows faster than any power: for every
rational alpha > 0, eventually a_i < a_{i+1}^alpha / 2. Values are kept as
BinaryScaled so comparisons never build the integers.
"""
import math
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ExponentNotRepresentable, InvalidParameter, TableTooShort
from .exact import BinaryScaled, power_bracket

# largest 2-exponent a value may have before it is written out as an integer
MAX_MATERIALIZED_BITS = 1 << 20


class GrowthKind(Enum):
    FACTORIAL_2EXP = "Factorial2Exp"
    USER_TABLE = "UserTable"


class GrowthSequence:
    def __init__(self, kind: GrowthKind = GrowthKind.FACTORIAL_2EXP,
                 table: Optional[Sequence] = None):
        self.kind = kind
        self._table = None
        if kind is GrowthKind.USER_TABLE:
            if not table:
                raise InvalidParameter("table", table, "a user table needs values")
            values = [Fraction(v) for v in table]
            if values[0] <= 0 or any(b <= a for a, b in zip(values, values[1:])):
                raise InvalidParameter("table", table, "must be positive and strictly increasing")
            self._table = values

    @classmethod
    def factorial_two_exp(cls) -> "GrowthSequence":
        return cls(GrowthKind.FACTORIAL_2EXP)

    @classmethod
    def from_table(cls, values: Sequence) -> "GrowthSequence":
        """Table entry k is a_{k+1}."""
        return cls(GrowthKind.USER_TABLE, values)

    def __len__(self):
        return len(self._table) if self._table is not None else 0

    def value(self, i: int) -> BinaryScaled:
        if i < 1:
            raise InvalidParameter("i", i, "growth sequences are indexed from 1")
        if self._table is None:
            return BinaryScaled.power_of_two(math.factorial(i))
        if i > len(self._table):
            raise TableTooShort(f"growth table has {len(self._table)} entries, a_{i} requested")
        return BinaryScaled.of(self._table[i - 1])

    __getitem__ = value

    def power(self, i: int, p) -> BinaryScaled:
        """a_i^p, exact; raises ExponentNotRepresentable for irrational powers."""
        return self.value(i) ** Fraction(p)

    def materialize(self, i: int) -> Fraction:
        value = self.value(i)
        if value.exponent > MAX_MATERIALIZED_BITS:
            raise InvalidParameter("i", i, f"a_{i} has about {value.exponent} bits")
        return value.to_fraction()

    def _power_lower(self, i: int, alpha: Fraction) -> BinaryScaled:
        value = self.value(i)
        try:
            return value ** alpha
        except ExponentNotRepresentable:
            lower = power_bracket(value.to_fraction(), alpha).lower
            return BinaryScaled.of(lower)

    def super_power_index(self, alpha, length: int) -> Optional[int]:
        """
        Smallest N with a_i < a_{i+1}^alpha / 2 for every i in [N, length).

        Returns None when even i = length - 1 fails.
        """
        alpha = Fraction(alpha)
        if alpha <= 0:
            raise InvalidParameter("alpha", alpha, "must be positive")
        if length < 2:
            raise InvalidParameter("length", length, "need at least two terms")
        index = None
        for i in range(length - 1, 0, -1):
            if self.value(i) * 2 < self._power_lower(i + 1, alpha):
                index = i
            else:
                break
        return index

    def super_power_prefix(self, alpha, length: int) -> bool:
        return self.super_power_index(alpha, length) is not None

    def is_increasing_prefix(self, length: int) -> bool:
        return all(self.value(i) < self.value(i + 1) for i in range(1, length))

    def __repr__(self):
        if self._table is None:
            return "GrowthSequence(2^(i!))"
        return f"GrowthSequence(table of {len(self._table)})"
