"""
Tower construction.

A Tower is a stack of equal-measure levels I_1..I_h with a translation map
carrying each level onto the next. The builders here produce:

    * balanced uniform partitions of a set (build_pub_partition)
    * balanced uniform towers via greedy stacking (build_tub_tower)
    * re-sorted tower maps that equalize running sums (refine_levels)
    * the two-tower construction for two-valued functions (build_two_step_towers)
    * decompositions of mean-zero step functions into two-valued pieces
"""
import bisect
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    ConstructionError,
    DegenerateInput,
    InvalidParameter,
    NotTwoStep,
    UnbalancedInput,
)
from .exact import lcm_of_denominators
from .measure_core import (
    Branch,
    Interval,
    IntervalSet,
    PiecewiseTranslation,
    StepFunction,
    compose,
    integral,
    invert,
    pullback,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


@dataclass(frozen=True)
class Tower:
    levels: Tuple[IntervalSet, ...]
    map: PiecewiseTranslation

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        _validate_tower(self.levels, self.map)

    @classmethod
    def stack(cls, levels: Sequence[IntervalSet]) -> "Tower":
        """Stack levels in order, each carried onto the next by the order-preserving matching."""
        branches: List[Branch] = []
        for lower, upper in zip(levels, levels[1:]):
            branches.extend(PiecewiseTranslation.matching(lower, upper).branches)
        return cls(tuple(levels), PiecewiseTranslation(branches))

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def base(self) -> IntervalSet:
        return self.levels[0]

    @property
    def top(self) -> IntervalSet:
        return self.levels[-1]

    @property
    def level_measure(self) -> Fraction:
        return self.levels[0].measure

    def union(self) -> IntervalSet:
        return IntervalSet(i for level in self.levels for i in level)

    def iterates(self) -> List[PiecewiseTranslation]:
        """tau_0..tau_{h-1}: tau_j carries the base onto level j (0-indexed)."""
        current = PiecewiseTranslation.identity(self.base)
        result = [current]
        for _ in range(self.height - 1):
            current = compose(self.map, current)
            result.append(current)
        return result

    def iterate(self, j: int) -> PiecewiseTranslation:
        if not 0 <= j < self.height:
            raise InvalidParameter("j", j, f"must lie in [0, {self.height})")
        return self.iterates()[j]

    def running_sums(self, f: StepFunction) -> List[StepFunction]:
        """R_0..R_h on the base: R_k(x) = sum_{i<k} f(tau^i x). R_h is the full sum."""
        sums = [StepFunction.zero()]
        total = StepFunction.zero()
        for level, tau in zip(self.levels, self.iterates()):
            total = total + pullback(f.restrict(level), tau)
            sums.append(total)
        return sums

    def full_sums(self, f: StepFunction) -> StepFunction:
        return self.running_sums(f)[-1]


def _validate_tower(levels: Tuple[IntervalSet, ...], tower_map: PiecewiseTranslation):
    if not levels:
        raise ConstructionError("a tower needs at least one level")
    measure = levels[0].measure
    if measure == 0:
        raise DegenerateInput("tower levels must have positive measure")
    owners: List[Tuple[Fraction, Fraction, int]] = []
    for index, level in enumerate(levels):
        if level.measure != measure:
            raise ConstructionError(
                f"level {index} has measure {level.measure}, expected {measure}")
        owners.extend((interval.lo, interval.hi, index) for interval in level)
    owners.sort()
    for (lo_a, hi_a, _), (lo_b, _, _) in zip(owners, owners[1:]):
        if lo_b < hi_a:
            raise ConstructionError("tower levels overlap")
    starts = [lo for lo, _, _ in owners]

    def owner_of(interval):
        k = bisect.bisect_right(starts, interval.lo) - 1
        if k < 0 or owners[k][1] < interval.hi:
            return None
        return owners[k][2]

    carried = [ZERO] * len(levels)
    top = len(levels) - 1
    for branch in tower_map.branches:
        # merged branches may run across several levels; check each piece on its own
        k = max(bisect.bisect_right(starts, branch.source.lo) - 1, 0)
        covered = ZERO
        while k < len(owners) and owners[k][0] < branch.source.hi:
            lo, hi, source_level = owners[k]
            k += 1
            piece = branch.source.intersect(Interval(lo, hi))
            if piece is None:
                continue
            if source_level == top:
                raise ConstructionError(f"map branch {branch.source} does not start in a lower level")
            if owner_of(piece.shift(branch.offset)) != source_level + 1:
                raise ConstructionError(
                    f"map branch {branch.source} does not land in level {source_level + 1}")
            carried[source_level] += piece.measure
            covered += piece.measure
        if covered != branch.source.measure:
            raise ConstructionError(f"map branch {branch.source} does not start in a lower level")
    for index in range(top):
        if carried[index] != measure:
            raise ConstructionError(f"map covers {carried[index]} of level {index}")


@dataclass(frozen=True)
class PubPartition:
    cells: Tuple[IntervalSet, ...]
    exceptional: IntervalSet
    epsilon: Fraction
    values: Tuple[Fraction, ...] = field(default=())
    reserved_cells: int = 0

    @property
    def cell_measure(self) -> Fraction:
        return self.cells[0].measure if self.cells else ZERO

    @property
    def n(self) -> int:
        """Number of equal pieces the exceptional share is measured against."""
        return len(self.cells) - self.reserved_cells + 1


def _atoms(f: StepFunction, region: IntervalSet, Q: Optional[Sequence[IntervalSet]]):
    parts = [region] if not Q else [q.intersection(region) for q in Q]
    atoms = []
    for part in parts:
        if not part.is_empty:
            atoms.extend(f.atoms(within=part))
    return atoms


def build_pub_partition(f: StepFunction,
                        A: IntervalSet,
                        epsilon,
                        Q: Optional[Sequence[IntervalSet]] = None,
                        reserve: Optional[IntervalSet] = None,
                        min_cells: int = 1) -> PubPartition:
    """
    Split A into equal-measure cells on which f is constant plus a small exceptional set E.

    Cells sit inside level sets of f (intersected with Q), so the oscillation on
    each cell is 0. Every level set gives the same proportion of itself to E,
    so E carries the mean of f exactly.

    Args:
        reserve: optional zero-valued subset of A that is cut into cells but
            gives nothing to E. Requires f mean-zero on A.
        min_cells: lower bound on the number of cells.
    """
    epsilon = Fraction(epsilon)
    if A.measure == 0:
        raise DegenerateInput("cannot partition a null set")
    if not 0 < epsilon < 1:
        raise InvalidParameter("epsilon", epsilon, "must lie in (0, 1)")

    if reserve is not None and not reserve.is_empty:
        return _reserved_pub_partition(f, A, epsilon, Q, reserve, min_cells)

    atoms = _atoms(f, A, Q)
    if len(atoms) == 1:
        value, region = atoms[0]
        return PubPartition((region,), IntervalSet.empty(), epsilon, (value,))

    total = A.measure
    ratios = [region.measure / total for _, region in atoms]
    lcm = lcm_of_denominators(ratios)
    # smallest multiple q of lcm with n = q + 1 > 1/epsilon and enough cells
    multiple = max(math.floor((1 / epsilon - 1) / lcm) + 1, 1)
    while lcm * multiple < min_cells:
        multiple += 1
    q = lcm * multiple
    n = q + 1
    cell_measure = total / n

    cells, values, exceptional = [], [], []
    for (value, region), ratio in zip(atoms, ratios):
        count = int(q * ratio)
        pieces = region.cut([cell_measure] * count)
        cells.extend(pieces)
        values.extend([value] * count)
        exceptional.extend(region.difference(IntervalSet(i for p in pieces for i in p)))
    partition = PubPartition(tuple(cells), IntervalSet(exceptional), epsilon, tuple(values))
    logger.debug("PUB partition: n=%s, %s cells of measure %s, mu(E)=%s",
                 n, len(cells), cell_measure, partition.exceptional.measure)
    _check_balance(f, A, partition)
    return partition


def _reserved_pub_partition(f, A, epsilon, Q, reserve, min_cells) -> PubPartition:
    if not reserve.issubset(A):
        raise InvalidParameter("reserve", reserve, "must be a subset of A")
    if not f.restrict(reserve).is_zero():
        raise InvalidParameter("reserve", reserve, "f must vanish on the reserved set")
    if integral(f, A) != 0:
        raise UnbalancedInput(integral(f, A), "A")
    rest = A.difference(reserve)
    atoms = _atoms(f, rest, Q) if rest.measure > 0 else []
    if not atoms:
        return build_pub_partition(f, A, epsilon, Q, None, min_cells)

    ratios = [region.measure / rest.measure for _, region in atoms]
    lcm = lcm_of_denominators(ratios)
    rho = reserve.measure / rest.measure
    multiple = 1
    while True:
        q = lcm * multiple
        reserved_count = math.floor(q * rho) + 1
        shrink = 1 - q * rho / reserved_count
        if shrink * rest.measure < epsilon * A.measure and q + reserved_count >= min_cells:
            break
        multiple += 1
    cell_measure = reserve.measure / reserved_count

    cells = list(reserve.split_equal(reserved_count))
    values = [ZERO] * reserved_count
    exceptional = []
    for (value, region), ratio in zip(atoms, ratios):
        count = int(q * ratio)
        pieces = region.cut([cell_measure] * count)
        cells.extend(pieces)
        values.extend([value] * count)
        exceptional.extend(region.difference(IntervalSet(i for p in pieces for i in p)))
    partition = PubPartition(tuple(cells), IntervalSet(exceptional), epsilon, tuple(values),
                             reserved_cells=reserved_count)
    logger.debug("reserved PUB partition: %s reserved + %s cells of measure %s, mu(E)=%s",
                 reserved_count, q, cell_measure, partition.exceptional.measure)
    _check_balance(f, A, partition)
    return partition


def _check_balance(f, A, partition: PubPartition):
    kept = A.difference(partition.exceptional)
    lhs = integral(f, kept)
    rhs = kept.measure / A.measure * integral(f, A)
    if lhs != rhs:
        raise ConstructionError(f"PUB balance failed: {lhs} != {rhs}")
    if not partition.exceptional.measure < partition.epsilon * A.measure:
        raise ConstructionError("exceptional set too large")


def _greedy_order(integrals: Sequence[Fraction], forced_ok: bool = False) -> List[int]:
    nonnegative = deque(k for k, v in enumerate(integrals) if v >= 0)
    negative = deque(k for k, v in enumerate(integrals) if v < 0)
    order = []
    running = ZERO
    while nonnegative or negative:
        preferred, other = (nonnegative, negative) if running <= 0 else (negative, nonnegative)
        if not preferred:
            if not forced_ok:
                raise ConstructionError("greedy stacking ran out of eligible cells")
            preferred = other
        k = preferred.popleft()
        order.append(k)
        running += integrals[k]
    return order


def greedy_stack(cells: Sequence) -> List[int]:
    """
    Order cells so prefix sums of their integrals stay small.

    If the running sum is <= 0 the next cell has integral >= 0, otherwise
    the next cell has integral < 0; ties go to the lowest index. Accepts
    (IntervalSet, integral) pairs or bare integrals.
    """
    integrals = [Fraction(c[1]) if isinstance(c, tuple) else Fraction(c) for c in cells]
    total = sum(integrals, ZERO)
    if total != 0:
        raise UnbalancedInput(total, "the cells")
    return _greedy_order(integrals)


def _tub_tower(f: StepFunction, A: IntervalSet, epsilon, min_height: int = 1,
               Q=None, reserve=None) -> Tuple[Tower, PubPartition]:
    epsilon = Fraction(epsilon)
    if A.measure == 0:
        raise DegenerateInput("cannot build a tower over a null set")
    total = integral(f, A)
    if total != 0:
        raise UnbalancedInput(total, "A")
    if f.restrict(A).is_zero() and not Q:
        partition = PubPartition((A,), IntervalSet.empty(), epsilon, (ZERO,))
        return Tower((A,), PiecewiseTranslation(())), partition

    partition = build_pub_partition(f, A, epsilon / 3, Q, reserve, min_cells=min_height + 1)
    cell_integrals = [value * cell.measure for value, cell in zip(partition.values, partition.cells)]
    order = _greedy_order(cell_integrals)
    tower = Tower.stack([partition.cells[k] for k in order])
    tower = refine_levels(tower, f, epsilon)
    logger.info("TUB tower: height %s over measure %s, exceptional %s",
                tower.height, A.measure, partition.exceptional.measure)
    return tower, partition


def build_tub_tower(f: StepFunction, A: IntervalSet, epsilon, min_height: int = 1,
                    Q: Optional[Sequence[IntervalSet]] = None) -> Tower:
    """Balanced uniform tower for f over A: small oscillation, running sums and full sums."""
    tower, _ = _tub_tower(f, A, epsilon, min_height, Q)
    return tower


@dataclass
class _Column:
    pieces: List[IntervalSet]
    total: Fraction

    @property
    def measure(self) -> Fraction:
        return self.pieces[0].measure

    def split(self, amount) -> Tuple["_Column", "_Column"]:
        heads, tails = [], []
        for piece in self.pieces:
            head, tail = piece.take(amount)
            heads.append(head)
            tails.append(tail)
        return _Column(heads, self.total), _Column(tails, self.total)


def refine_levels(tower: Tower, f: StepFunction, epsilon) -> Tower:
    """
    Rebuild the tower map by sorting so every base point sees nearly the same running sums.

    f is quantized into buckets of width 1/k with k the smallest integer
    above 3h/epsilon. The base is ordered by non-increasing bucket; each
    further level is ordered by non-decreasing bucket and laid against the
    columns sorted by non-increasing accumulated sum.
    """
    epsilon = Fraction(epsilon)
    h = tower.height
    k = math.floor(3 * h / epsilon) + 1
    quantized = f.map_values(lambda v: Fraction(math.floor(k * v)))

    base_groups = quantized.atoms(within=tower.base)
    columns = [_Column([region], bucket) for bucket, region in reversed(base_groups)]
    for level in tower.levels[1:]:
        columns.sort(key=lambda c: c.total, reverse=True)
        groups = deque(quantized.atoms(within=level))
        pending = deque(columns)
        columns = []
        bucket, region = groups.popleft()
        while pending:
            column = pending.popleft()
            if column.measure > region.measure:
                column, remainder = column.split(region.measure)
                pending.appendleft(remainder)
            part, region = region.take(column.measure)
            columns.append(_Column(column.pieces + [part], column.total + bucket))
            if region.is_empty and groups:
                bucket, region = groups.popleft()

    branches: List[Branch] = []
    for column in columns:
        for lower, upper in zip(column.pieces, column.pieces[1:]):
            branches.extend(PiecewiseTranslation.matching(lower, upper).branches)
    return Tower(tower.levels, PiecewiseTranslation(branches))


def base_sum_spread(tower: Tower, f: StepFunction) -> Fraction:
    """Largest difference between running sums of two base points at a common height."""
    spread = ZERO
    for running in tower.running_sums(f)[1:-1] or []:
        values = [value for _, value in running.restrict(tower.base).pieces]
        if running.restrict(tower.base).support().measure < tower.base.measure:
            values.append(ZERO)
        if values:
            spread = max(spread, max(values) - min(values))
    return spread


@dataclass(frozen=True)
class TowerPair:
    towers: Tuple[Tower, Tower]
    epsilon: Fraction
    full_sums: Tuple[Fraction, Fraction]

    @property
    def heights(self) -> Tuple[int, int]:
        return self.towers[0].height, self.towers[1].height


def _two_step_order(positive: int, negative: int, b: Fraction, c: Fraction) -> List[bool]:
    """Stacking pattern: True for a B level, False for a C level."""
    pattern = []
    running = ZERO
    while positive or negative:
        take_b = (running < 0 and positive > 0) or negative == 0
        if take_b:
            positive -= 1
            running += b
        else:
            negative -= 1
            running -= c
        pattern.append(take_b)
    return pattern


def _stack_two_step(pattern: List[bool], b_cells: List[IntervalSet],
                    c_cells: List[IntervalSet]) -> Tower:
    b_iter, c_iter = iter(b_cells), iter(c_cells)
    return Tower.stack([next(b_iter) if is_b else next(c_iter) for is_b in pattern])


def _check_running(pattern: List[bool], b: Fraction, c: Fraction):
    bound = max(b, c)
    running = ZERO
    for is_b in pattern:
        running += b if is_b else -c
        if abs(running) > bound:
            raise ConstructionError(f"running sum {running} exceeds {bound}")


def build_two_step_towers(f: StepFunction,
                          A: IntervalSet,
                          min_height: int,
                          epsilon,
                          convergents: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None
                          ) -> TowerPair:
    """
    Two disjoint towers partitioning A for a function taking b > 0 on B and -c < 0 on C.

    With a rational ratio c/b = p/q both towers repeat p B-levels and q C-levels
    and have full sum 0. With `convergents` ((p1, q1), (p2, q2)) the towers have
    p2 + q2 and (p2 - p1) + (q2 - q1) levels and small nonzero full sums.
    """
    epsilon = Fraction(epsilon)
    if min_height < 1:
        raise InvalidParameter("min_height", min_height, "must be positive")
    if A.measure == 0:
        raise DegenerateInput("A is a null set")
    atoms = f.atoms(within=A)
    if len(atoms) != 2 or not (atoms[0][0] < 0 < atoms[1][0]):
        raise NotTwoStep(f"need exactly one positive and one negative value on A, got "
                         f"{[value for value, _ in atoms]}")
    (neg_value, C), (b, B) = atoms
    c = -neg_value
    total = integral(f, A)
    if total != 0:
        raise UnbalancedInput(total, "A")

    if convergents is None:
        ratio = c / b
        p0, q0 = ratio.numerator, ratio.denominator
        multiple = min_height // (p0 + q0) + 1
        p, q = multiple * p0, multiple * q0
        width = A.measure / (2 * (p + q))
        b_cells = B.split_equal(2 * p)
        c_cells = C.split_equal(2 * q)
        pattern = _two_step_order(p, q, b, c)
        _check_running(pattern, b, c)
        first = _stack_two_step(pattern, b_cells[:p], c_cells[:q])
        second = _stack_two_step(pattern, b_cells[p:], c_cells[q:])
        logger.info("two-step towers (exact ratio %s): heights %s, %s, level measure %s",
                    ratio, first.height, second.height, width)
        return TowerPair((first, second), epsilon, (ZERO, ZERO))

    (p1, q1), (p2, q2) = convergents
    delta1, delta2 = p1 * b - q1 * c, p2 * b - q2 * c
    if delta1 == 0 or delta2 == 0 or (delta1 > 0) != (delta2 > 0):
        raise InvalidParameter("convergents", convergents, "defects must be nonzero with one sign")
    if not abs(delta2) < abs(delta1) < epsilon:
        raise InvalidParameter("convergents", convergents, "need |delta2| < |delta1| < epsilon")
    if not abs(delta1) < min(b, c) / 2:
        raise InvalidParameter("convergents", convergents, "need |delta1| < min(b, c)/2")
    if not (p1 < epsilon * p2 and q1 < epsilon * q2):
        raise InvalidParameter("convergents", convergents, "need p1 < eps*p2 and q1 < eps*q2")
    p3, q3 = p2 - p1, q2 - q1
    delta3 = delta1 - delta2
    h1, h2 = p2 + q2, p3 + q3
    if min(h1, h2) <= min_height:
        raise InvalidParameter("convergents", convergents,
                               f"tower heights {h1}, {h2} must exceed {min_height}")
    if not 1 - epsilon < Fraction(h1, h2) < 1 + epsilon:
        raise InvalidParameter("convergents", convergents,
                               f"height ratio {Fraction(h1, h2)} not within epsilon of 1")

    denominator = h1 * delta3 + h2 * delta2
    w1 = A.measure * delta3 / denominator
    w2 = A.measure * delta2 / denominator
    if p2 * w1 + p3 * w2 != B.measure or q2 * w1 + q3 * w2 != C.measure:
        raise ConstructionError("two-step cell measures do not exhaust B and C")
    b_cells = B.cut([w1] * p2 + [w2] * p3)
    c_cells = C.cut([w1] * q2 + [w2] * q3)
    pattern1 = _two_step_order(p2, q2, b, c)
    pattern2 = _two_step_order(p3, q3, b, c)
    _check_running(pattern1, b, c)
    _check_running(pattern2, b, c)
    first = _stack_two_step(pattern1, b_cells[:p2], c_cells[:q2])
    second = _stack_two_step(pattern2, b_cells[p2:], c_cells[q2:])
    sums = (p2 * b - q2 * c, p3 * b - q3 * c)
    logger.info("two-step towers from convergents: heights %s, %s, full sums %s, %s",
                h1, h2, sums[0], sums[1])
    return TowerPair((first, second), epsilon, sums)


@dataclass(frozen=True)
class DecompositionPart:
    carrier: IntervalSet
    restricted_f: StepFunction


@dataclass(frozen=True)
class Decomposition:
    parts: Tuple[DecompositionPart, ...]

    def __len__(self):
        return len(self.parts)

    def carriers(self) -> List[IntervalSet]:
        return [part.carrier for part in self.parts]


def decompose_two_value(f: StepFunction) -> Decomposition:
    """
    Split a mean-zero step function into mean-zero pieces taking at most two values.

    Each step takes the level set with the smallest |a_j| mu(I_j) and pairs it
    with just enough of the first level set of opposite sign.
    """
    total = integral(f)
    if total != 0:
        raise UnbalancedInput(total)
    remaining = [[value, region] for value, region in f.atoms() if value != 0]
    parts = []
    while remaining:
        j = min(range(len(remaining)), key=lambda k: abs(remaining[k][0]) * remaining[k][1].measure)
        value_j, region_j = remaining[j]
        opposite = [k for k in range(len(remaining)) if remaining[k][0] * value_j < 0]
        if not opposite:
            raise ConstructionError("no level set of opposite sign left to balance against")
        k = opposite[0]
        value_k, region_k = remaining[k]
        amount = abs(value_j) * region_j.measure / abs(value_k)
        paired, rest = region_k.take(amount)
        carrier = region_j.union(paired)
        parts.append(DecompositionPart(carrier, f.restrict(carrier)))
        remaining[k][1] = rest
        remaining = [item for index, item in enumerate(remaining)
                     if index != j and not item[1].is_empty]
    logger.debug("two-value decomposition: %s parts", len(parts))
    return Decomposition(tuple(parts))


def geometric_schedule(first, count: int, ratio=Fraction(1, 2)) -> List[Fraction]:
    first, ratio = Fraction(first), Fraction(ratio)
    return [first * ratio ** i for i in range(count)]


def decompose_bounded(f: StepFunction, epsilons: Iterable, min_height: int = 1) -> List[Tower]:
    """Disjoint towers covering the support of f, each from a two-valued piece of f."""
    total = integral(f)
    if total != 0:
        raise UnbalancedInput(total)
    if f.is_zero():
        return []
    schedule = iter(epsilons)
    towers: List[Tower] = []
    for part in decompose_two_value(f).parts:
        try:
            epsilon = Fraction(next(schedule))
        except StopIteration:
            raise InvalidParameter("epsilons", "schedule", "fewer tolerances than two-valued parts")
        pair = build_two_step_towers(part.restricted_f, part.carrier, min_height, epsilon)
        towers.extend(pair.towers)
    logger.info("bounded decomposition: %s towers", len(towers))
    return towers
