"""
Exact model of [0,1) with Lebesgue measure.

Intervals are half-open [lo, hi). IntervalSet and StepFunction are kept in
canonical form (sorted, merged) so equality is structural equality.
PiecewiseTranslation is a finite interval-exchange-style partial bijection.

Public operations mirror the math: integral, apply, compose, invert, pullback.
"""
import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    DomainMismatch,
    InvalidParameter,
    NotBijective,
    PointOutsideDomain,
)
from .exact import parse_rational
from .settings import check_branch_count

ZERO = Fraction(0)
ONE = Fraction(1)


def _scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return parse_rational(value)


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _scalar(self.lo), _scalar(self.hi)
        if not (ZERO <= lo < hi <= ONE):
            raise InvalidParameter("interval", f"[{lo}, {hi})", "need 0 <= lo < hi <= 1")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def measure(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x < self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo < hi:
            return Interval(lo, hi)
        return None

    def shift(self, offset) -> "Interval":
        return Interval(self.lo + offset, self.hi + offset)

    def __repr__(self):
        return f"[{self.lo}, {self.hi})"


def _as_interval(item) -> Interval:
    if isinstance(item, Interval):
        return item
    lo, hi = item
    return Interval(_scalar(lo), _scalar(hi))


class IntervalSet:
    """Finite disjoint union of half-open intervals, sorted and merged."""
    __slots__ = ("_intervals", "_measure", "_los")

    def __init__(self, intervals: Iterable = ()):
        items = sorted(_as_interval(i) for i in intervals)
        merged: List[Interval] = []
        for interval in items:
            if merged and interval.lo <= merged[-1].hi:
                if interval.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, interval.hi)
            else:
                merged.append(interval)
        self._intervals = tuple(merged)
        self._measure = sum((i.measure for i in merged), ZERO)
        self._los = [i.lo for i in merged]

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls([Interval(ZERO, ONE)])

    @classmethod
    def span(cls, lo, hi) -> "IntervalSet":
        return cls([Interval(_scalar(lo), _scalar(hi))])

    @property
    def intervals(self) -> Tuple[Interval, ...]:
        return self._intervals

    @property
    def measure(self) -> Fraction:
        return self._measure

    @property
    def is_empty(self) -> bool:
        return not self._intervals

    def __iter__(self):
        return iter(self._intervals)

    def __len__(self):
        return len(self._intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        if not self._intervals:
            return "IntervalSet(∅)"
        return "IntervalSet(" + " ∪ ".join(repr(i) for i in self._intervals) + ")"

    def contains(self, x) -> bool:
        x = _scalar(x)
        k = bisect.bisect_right(self._los, x) - 1
        return k >= 0 and self._intervals[k].contains(x)

    def clip(self, interval: Interval) -> List[Interval]:
        """Parts of `interval` lying in this set, in order."""
        start = max(bisect.bisect_right(self._los, interval.lo) - 1, 0)
        parts = []
        for member in self._intervals[start:]:
            if member.lo >= interval.hi:
                break
            overlap = member.intersect(interval)
            if overlap is not None:
                parts.append(overlap)
        return parts

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self._intervals + other._intervals)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        result = []
        a, b = self._intervals, other._intervals
        i = j = 0
        while i < len(a) and j < len(b):
            overlap = a[i].intersect(b[j])
            if overlap is not None:
                result.append(overlap)
            if a[i].hi <= b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet(result)

    def complement(self) -> "IntervalSet":
        result = []
        cursor = ZERO
        for interval in self._intervals:
            if interval.lo > cursor:
                result.append(Interval(cursor, interval.lo))
            cursor = interval.hi
        if cursor < ONE:
            result.append(Interval(cursor, ONE))
        return IntervalSet(result)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersection(other.complement())

    def is_disjoint(self, other: "IntervalSet") -> bool:
        return self.intersection(other).is_empty

    def issubset(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty

    def shift(self, offset) -> "IntervalSet":
        return IntervalSet(i.shift(offset) for i in self._intervals)

    def take(self, amount) -> Tuple["IntervalSet", "IntervalSet"]:
        """Split into (leading part of measure `amount`, the rest), by left endpoint."""
        amount = _scalar(amount)
        if amount < 0 or amount > self._measure:
            raise InvalidParameter("amount", amount, f"must lie in [0, {self._measure}]")
        head, tail = [], []
        remaining = amount
        for interval in self._intervals:
            if remaining <= 0:
                tail.append(interval)
            elif interval.measure <= remaining:
                head.append(interval)
                remaining -= interval.measure
            else:
                cut = interval.lo + remaining
                head.append(Interval(interval.lo, cut))
                tail.append(Interval(cut, interval.hi))
                remaining = ZERO
        return IntervalSet(head), IntervalSet(tail)

    def cut(self, amounts: Sequence) -> List["IntervalSet"]:
        """Consecutive pieces with the given measures; they must not exceed the total."""
        pieces = []
        rest = self
        for amount in amounts:
            piece, rest = rest.take(amount)
            pieces.append(piece)
        return pieces

    def split_equal(self, count: int) -> List["IntervalSet"]:
        if count <= 0:
            raise InvalidParameter("count", count, "must be positive")
        return self.cut([self._measure / count] * count)


def _as_set(region) -> IntervalSet:
    if region is None:
        return IntervalSet.unit()
    if isinstance(region, IntervalSet):
        return region
    if isinstance(region, Interval):
        return IntervalSet([region])
    return IntervalSet(region)


class StepFunction:
    """
    Finitely many (Interval, value) pieces, value 0 elsewhere.

    Zero-valued pieces are dropped and equal-valued neighbours merged, so
    two step functions are equal a.e. exactly when they compare equal.
    """
    __slots__ = ("_pieces", "_los")

    def __init__(self, pieces: Iterable = ()):
        items = []
        for interval, value in pieces:
            value = _scalar(value)
            if value != 0:
                items.append((_as_interval(interval), value))
        items.sort(key=lambda piece: piece[0].lo)
        merged: List[Tuple[Interval, Fraction]] = []
        for interval, value in items:
            if merged:
                last_interval, last_value = merged[-1]
                if interval.lo < last_interval.hi:
                    raise InvalidParameter(
                        "pieces", f"{last_interval} and {interval}", "pieces overlap")
                if interval.lo == last_interval.hi and value == last_value:
                    merged[-1] = (Interval(last_interval.lo, interval.hi), value)
                    continue
            merged.append((interval, value))
        check_branch_count(len(merged), "step-function pieces")
        self._pieces = tuple(merged)
        self._los = [interval.lo for interval, _ in merged]

    ### constructors ###
    @classmethod
    def zero(cls) -> "StepFunction":
        return cls(())

    @classmethod
    def indicator(cls, region, value=1) -> "StepFunction":
        return cls((interval, value) for interval in _as_set(region))

    @classmethod
    def from_breakpoints(cls, breakpoints: Sequence, values: Sequence) -> "StepFunction":
        """Values on [b0,b1), [b1,b2), ...; len(values) == len(breakpoints) - 1."""
        if len(values) != len(breakpoints) - 1:
            raise InvalidParameter("values", len(values), "need one value per gap")
        points = [_scalar(b) for b in breakpoints]
        return cls((Interval(points[k], points[k + 1]), values[k]) for k in range(len(values)))

    ### structure ###
    @property
    def pieces(self) -> Tuple[Tuple[Interval, Fraction], ...]:
        return self._pieces

    def __len__(self):
        return len(self._pieces)

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._pieces == other._pieces

    def __hash__(self):
        return hash(self._pieces)

    def __repr__(self):
        body = ", ".join(f"{interval!r}: {value}" for interval, value in self._pieces)
        return f"StepFunction({body})"

    def __call__(self, x) -> Fraction:
        x = _scalar(x)
        k = bisect.bisect_right(self._los, x) - 1
        if k >= 0:
            interval, value = self._pieces[k]
            if interval.contains(x):
                return value
        return ZERO

    def is_zero(self) -> bool:
        return not self._pieces

    def support(self) -> IntervalSet:
        return IntervalSet(interval for interval, _ in self._pieces)

    def values(self) -> List[Fraction]:
        """Distinct nonzero values, ascending."""
        return sorted({value for _, value in self._pieces})

    def sup_norm(self) -> Fraction:
        return max((abs(value) for _, value in self._pieces), default=ZERO)

    def max_value(self) -> Fraction:
        return max((value for _, value in self._pieces), default=ZERO)

    def where(self, predicate: Callable[[Fraction], bool], within=None) -> IntervalSet:
        """The set {x in within : predicate(f(x))}; the zero region counts as value 0."""
        within = _as_set(within)
        chosen = [interval for interval, value in self._pieces if predicate(value)]
        region = IntervalSet(chosen)
        if predicate(ZERO):
            region = region.union(within.difference(self.support()))
        return region.intersection(within)

    def level_set(self, value, within=None) -> IntervalSet:
        value = _scalar(value)
        return self.where(lambda v: v == value, within)

    def atoms(self, within=None) -> List[Tuple[Fraction, IntervalSet]]:
        """(value, level set) pairs inside `within`, ascending by value, empty sets skipped."""
        within = _as_set(within)
        result = []
        for value in sorted(set(self.values()) | {ZERO}):
            region = self.level_set(value, within)
            if not region.is_empty:
                result.append((value, region))
        return result

    def restrict(self, region) -> "StepFunction":
        region = _as_set(region)
        pieces = []
        for interval, value in self._pieces:
            for part in region.clip(interval):
                pieces.append((part, value))
        return StepFunction(pieces)

    ### arithmetic ###
    def _combine(self, other: "StepFunction", op) -> "StepFunction":
        points = set()
        for interval, _ in self._pieces + other._pieces:
            points.add(interval.lo)
            points.add(interval.hi)
        ordered = sorted(points)
        pieces = []
        for lo, hi in zip(ordered, ordered[1:]):
            value = op(self(lo), other(lo))
            if value != 0:
                pieces.append((Interval(lo, hi), value))
        return StepFunction(pieces)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return StepFunction((interval, -value) for interval, value in self._pieces)

    def scale(self, factor) -> "StepFunction":
        factor = _scalar(factor)
        return StepFunction((interval, value * factor) for interval, value in self._pieces)

    def __mul__(self, factor):
        return self.scale(factor)

    __rmul__ = __mul__

    def map_values(self, fn: Callable[[Fraction], Fraction]) -> "StepFunction":
        """Apply fn piecewise; fn(0) is taken to be 0."""
        return StepFunction((interval, fn(value)) for interval, value in self._pieces)

    def abs(self) -> "StepFunction":
        return self.map_values(abs)

    def positive_part(self) -> "StepFunction":
        return self.map_values(lambda v: v if v > 0 else ZERO)

    def negative_part(self) -> "StepFunction":
        return self.map_values(lambda v: -v if v < 0 else ZERO)

    def integral(self, over=None) -> Fraction:
        return integral(self, over)

    def mean_zero(self, over=None) -> bool:
        return integral(self, over) == 0


@dataclass(frozen=True)
class Branch:
    source: Interval
    offset: Fraction

    @property
    def image(self) -> Interval:
        return self.source.shift(self.offset)


class PiecewiseTranslation:
    """
    Partial bijection of [0,1) that translates each source interval by its offset.

    Sources partition the domain, images are pairwise disjoint. When the
    domain has measure 1 the map is a measure-preserving bijection mod null sets.
    """
    __slots__ = ("_branches", "_los")

    def __init__(self, branches: Iterable = ()):
        items = []
        for branch in branches:
            if not isinstance(branch, Branch):
                source, offset = branch
                branch = Branch(_as_interval(source), _scalar(offset))
            items.append(branch)
        items.sort(key=lambda b: b.source.lo)
        merged: List[Branch] = []
        for branch in items:
            if merged:
                last = merged[-1]
                if branch.source.lo < last.source.hi:
                    raise InvalidParameter(
                        "branches", f"{last.source} and {branch.source}", "sources overlap")
                if branch.source.lo == last.source.hi and branch.offset == last.offset:
                    merged[-1] = Branch(Interval(last.source.lo, branch.source.hi), last.offset)
                    continue
            merged.append(branch)
        # building each image validates that it stays inside [0,1)
        images = sorted(b.image for b in merged)
        for left, right in zip(images, images[1:]):
            if right.lo < left.hi:
                raise NotBijective(f"images {left} and {right} overlap")
        check_branch_count(len(merged))
        self._branches = tuple(merged)
        self._los = [b.source.lo for b in merged]

    ### constructors ###
    @classmethod
    def identity(cls, domain=None) -> "PiecewiseTranslation":
        return cls(Branch(interval, ZERO) for interval in _as_set(domain))

    @classmethod
    def rotation(cls, alpha) -> "PiecewiseTranslation":
        """x -> x + alpha mod 1."""
        alpha = _scalar(alpha) % 1
        if alpha == 0:
            return cls.identity()
        return cls([
            Branch(Interval(ZERO, ONE - alpha), alpha),
            Branch(Interval(ONE - alpha, ONE), alpha - ONE),
        ])

    @classmethod
    def swap_halves(cls) -> "PiecewiseTranslation":
        half = Fraction(1, 2)
        return cls([Branch(Interval(ZERO, half), half), Branch(Interval(half, ONE), -half)])

    @classmethod
    def matching(cls, source: IntervalSet, target: IntervalSet) -> "PiecewiseTranslation":
        """Order-preserving translation carrying `source` onto `target` (equal measure)."""
        if source.measure != target.measure:
            raise DomainMismatch(
                f"cannot match sets of measure {source.measure} and {target.measure}")
        return cls(_matching_branches(source, target))

    @classmethod
    def rotate_within(cls, region: IntervalSet, shift) -> "PiecewiseTranslation":
        """Rotation by `shift` of the measure coordinate of `region`, conjugated back."""
        total = region.measure
        if total == 0:
            return cls(())
        shift = _scalar(shift) % total
        if shift == 0:
            return cls.identity(region)
        head, tail = region.take(total - shift)
        target_head, target_tail = region.take(shift)
        return cls(_matching_branches(head, target_tail) + _matching_branches(tail, target_head))

    ### structure ###
    @property
    def branches(self) -> Tuple[Branch, ...]:
        return self._branches

    def __len__(self):
        return len(self._branches)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseTranslation):
            return NotImplemented
        return self._branches == other._branches

    def __hash__(self):
        return hash(self._branches)

    def __repr__(self):
        body = ", ".join(f"{b.source!r}+{b.offset}" for b in self._branches)
        return f"PiecewiseTranslation({body})"

    def domain(self) -> IntervalSet:
        return IntervalSet(b.source for b in self._branches)

    def image(self) -> IntervalSet:
        return IntervalSet(b.image for b in self._branches)

    def is_bijective(self) -> bool:
        return self.domain().measure == ONE and self.image().measure == ONE

    def is_identity(self) -> bool:
        return all(b.offset == 0 for b in self._branches)

    def apply(self, x) -> Fraction:
        return apply(self, x)

    def restrict(self, region) -> "PiecewiseTranslation":
        region = _as_set(region)
        branches = []
        for branch in self._branches:
            for part in region.clip(branch.source):
                branches.append(Branch(part, branch.offset))
        return PiecewiseTranslation(branches)

    def glue(self, other: "PiecewiseTranslation") -> "PiecewiseTranslation":
        """Union of two maps with disjoint domains and disjoint images."""
        if not self.domain().is_disjoint(other.domain()):
            raise DomainMismatch("glued maps have overlapping domains")
        return PiecewiseTranslation(self._branches + other._branches)

    def disagreement(self, other: "PiecewiseTranslation") -> IntervalSet:
        """Points of self's domain where `other` is undefined or moves them elsewhere."""
        agree = []
        for branch in self._branches:
            for theirs in other._branches_meeting(branch.source):
                if theirs.offset != branch.offset:
                    continue
                overlap = branch.source.intersect(theirs.source)
                if overlap is not None:
                    agree.append(overlap)
        return self.domain().difference(IntervalSet(agree))

    def compose(self, inner: "PiecewiseTranslation") -> "PiecewiseTranslation":
        return compose(self, inner)

    def invert(self) -> "PiecewiseTranslation":
        return invert(self)

    def power(self, n: int) -> "PiecewiseTranslation":
        if n < 0:
            return invert(self).power(-n)
        result = PiecewiseTranslation.identity(self.domain())
        for _ in range(n):
            result = compose(self, result)
        return result

    def _branches_meeting(self, interval: Interval) -> List[Branch]:
        start = max(bisect.bisect_right(self._los, interval.lo) - 1, 0)
        found = []
        for branch in self._branches[start:]:
            if branch.source.lo >= interval.hi:
                break
            if branch.source.hi > interval.lo:
                found.append(branch)
        return found


def _matching_branches(source: IntervalSet, target: IntervalSet) -> List[Branch]:
    branches = []
    targets = list(target)
    t = 0
    t_cursor = targets[0].lo if targets else ZERO
    for interval in source:
        s_cursor = interval.lo
        while s_cursor < interval.hi:
            current = targets[t]
            length = min(interval.hi - s_cursor, current.hi - t_cursor)
            branches.append(Branch(Interval(s_cursor, s_cursor + length), t_cursor - s_cursor))
            s_cursor += length
            t_cursor += length
            if t_cursor == current.hi and t + 1 < len(targets):
                t += 1
                t_cursor = targets[t].lo
    return branches


### operations ###

def integral(f: StepFunction, over=None) -> Fraction:
    """∫_over f dμ, exact."""
    region = _as_set(over)
    total = ZERO
    for interval, value in f.pieces:
        total += value * sum((part.measure for part in region.clip(interval)), ZERO)
    return total


def apply(T: PiecewiseTranslation, x) -> Fraction:
    x = _scalar(x)
    k = bisect.bisect_right(T._los, x) - 1
    if k >= 0:
        branch = T.branches[k]
        if branch.source.contains(x):
            return x + branch.offset
    raise PointOutsideDomain(x)


def compose(T: PiecewiseTranslation, S: PiecewiseTranslation) -> PiecewiseTranslation:
    """T∘S: apply S first. The image of S must lie in the domain of T."""
    branches = []
    for inner in S.branches:
        image = inner.image
        covered = ZERO
        for outer in T._branches_meeting(image):
            overlap = image.intersect(outer.source)
            if overlap is None:
                continue
            covered += overlap.measure
            branches.append(Branch(overlap.shift(-inner.offset), inner.offset + outer.offset))
        if covered != image.measure:
            raise DomainMismatch(f"image piece {image} of the inner map leaves the outer domain")
    return PiecewiseTranslation(branches)


def invert(T: PiecewiseTranslation) -> PiecewiseTranslation:
    return PiecewiseTranslation(Branch(b.image, -b.offset) for b in T.branches)


def pullback(f: StepFunction, T: PiecewiseTranslation) -> StepFunction:
    """f∘T on the domain of T. The image of T must cover the support of f."""
    support = f.support()
    if support.intersection(T.image()).measure != support.measure:
        raise DomainMismatch("the support of f is not covered by the image of T")
    los = [interval.lo for interval, _ in f.pieces]
    pieces = []
    for branch in T.branches:
        image = branch.image
        start = max(bisect.bisect_right(los, image.lo) - 1, 0)
        for interval, value in f.pieces[start:]:
            if interval.lo >= image.hi:
                break
            overlap = interval.intersect(image)
            if overlap is not None:
                pieces.append((overlap.shift(-branch.offset), value))
    return StepFunction(pieces)


def dyadic_partition(level: int) -> List[IntervalSet]:
    """The 2**level dyadic intervals of [0,1)."""
    size = Fraction(1, 2 ** level)
    return [IntervalSet.span(k * size, (k + 1) * size) for k in range(2 ** level)]
