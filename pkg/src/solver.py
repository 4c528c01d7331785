"""
End-to-end constructions for f = g - g∘T.

Sign convention everywhere: a transfer function g solves f when
f = g - g∘T, so along a tower g(T^j x) = g(x) - sum_{i<j} f(T^i x).
"""
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    ConstructionError,
    DomainMismatch,
    InvalidBaseSolution,
    InvalidParameter,
    NonFiniteStep,
    UnbalancedInput,
)
from .exact import Bracket, floor_log2, format_rational, power_bracket
from .measure_core import (
    Branch,
    IntervalSet,
    PiecewiseTranslation,
    StepFunction,
    _as_set,
    compose,
    dyadic_partition,
    integral,
    invert,
    pullback,
)
from .norms import power_integral
from .towers import (
    PubPartition,
    Tower,
    _greedy_order,
    _tub_tower,
    build_pub_partition,
    decompose_bounded,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


### certificates ###

@dataclass(frozen=True)
class SolutionCertificate:
    f: StepFunction
    transformation: PiecewiseTranslation
    transfer: StepFunction
    exact_set: IntervalSet
    residual_bound: Fraction
    sup_bound: Fraction

    @property
    def exact_measure(self) -> Fraction:
        return self.exact_set.measure

    def to_dict(self):
        from .serialization import interval_set_to_list, step_function_to_dict, transformation_to_dict
        return {
            "status": "certified",
            "exact_measure": format_rational(self.exact_measure),
            "exact_set": interval_set_to_list(self.exact_set),
            "residual_bound": format_rational(self.residual_bound),
            "sup_bound": format_rational(self.sup_bound),
            "transformation": transformation_to_dict(self.transformation),
            "transfer": step_function_to_dict(self.transfer),
        }


@dataclass(frozen=True)
class Refutation:
    f: StepFunction
    transformation: PiecewiseTranslation
    transfer: StepFunction
    witness: IntervalSet
    exact_set: IntervalSet

    @property
    def witness_measure(self) -> Fraction:
        return self.witness.measure

    def to_dict(self):
        from .serialization import interval_set_to_list
        return {
            "status": "refuted",
            "witness": interval_set_to_list(self.witness),
            "witness_measure": format_rational(self.witness_measure),
            "exact_measure": format_rational(self.exact_set.measure),
        }


def verify(f: StepFunction, T: PiecewiseTranslation, g: StepFunction,
           on=None) -> Union[SolutionCertificate, Refutation]:
    """
    Check f = g - g∘T exactly.

    Returns a certificate whose exact_set is {g - g∘T = f} when that set
    covers `on` (default all of [0,1)), otherwise a Refutation carrying the
    part of `on` where the identity fails.
    """
    domain = T.domain()
    if domain != T.image():
        raise DomainMismatch("T must map its domain onto itself")
    g_domain = g.restrict(domain)
    h = g_domain - pullback(g_domain, T)
    exact_set = (h - f).where(lambda v: v == 0, within=domain)
    witness = _as_set(on).difference(exact_set)
    if witness.measure > 0:
        logger.info("verify: identity fails on a set of measure %s", witness.measure)
        return Refutation(f, T, g, witness, exact_set)
    return SolutionCertificate(f, T, g, exact_set, 1 - exact_set.measure, g.sup_norm())


def _pull(f: StepFunction, P: PiecewiseTranslation) -> StepFunction:
    return pullback(f.restrict(P.image()), P)


def exact_orbit_set(certificate: SolutionCertificate, n: int) -> IntervalSet:
    """Points whose first n iterates all stay in the certificate's exact set."""
    T = certificate.transformation
    region = certificate.exact_set
    current = PiecewiseTranslation.identity(T.domain())
    for _ in range(n - 1):
        current = compose(T, current)
        landing = _pull(StepFunction.indicator(certificate.exact_set), current).support()
        region = region.intersection(landing)
    return region


def telescoping_holds(certificate: SolutionCertificate, n: int) -> bool:
    """sum_{i<n} f∘T^i == g - g∘T^n on the exact orbit set."""
    if n < 1:
        raise InvalidParameter("n", n, "must be positive")
    T = certificate.transformation
    f, g = certificate.f, certificate.transfer
    power = PiecewiseTranslation.identity(T.domain())
    birkhoff = StepFunction.zero()
    for _ in range(n):
        birkhoff = birkhoff + _pull(f, power)
        power = compose(T, power)
    rhs = g.restrict(T.domain()) - _pull(g, power)
    orbit = exact_orbit_set(certificate, n)
    return (birkhoff - rhs).restrict(orbit).is_zero()


### tower extension ###

def induced_function(f: StepFunction, towers: Sequence[Tower]) -> StepFunction:
    """f_A on the union of the bases: the full sum of f up each tower."""
    pieces = []
    for tower in towers:
        pieces.extend(tower.full_sums(f).restrict(tower.base).pieces)
    return StepFunction(pieces)


def _prefix_values(tower: Tower, f: StepFunction) -> List[Fraction]:
    values = [ZERO]
    for running in tower.running_sums(f)[1:-1]:
        on_base = running.restrict(tower.base)
        values.extend(value for _, value in on_base.pieces)
    return values


def _centre(towers: Sequence[Tower], f: StepFunction) -> Fraction:
    values = [v for tower in towers for v in _prefix_values(tower, f)]
    return (max(values) + min(values)) / 2


def extend_coboundary(f: StepFunction,
                      towers: Sequence[Tower],
                      T_A: PiecewiseTranslation,
                      g_A: StepFunction) -> Tuple[PiecewiseTranslation, StepFunction]:
    """
    Lift a solution on the tower bases to the towers.

    Requires f_A = g_A - g_A∘T_A on A, the union of the bases. T moves up
    each tower and sends a top point y = tau^{h-1}(x) to T_A(x). Points off
    the towers are fixed and carry g = 0.
    """
    A = IntervalSet(i for tower in towers for i in tower.base)
    if T_A.domain() != A or T_A.image() != A:
        raise InvalidBaseSolution("T_A must map the union of the tower bases onto itself")
    g_base = g_A.restrict(A)
    f_A = induced_function(f, towers)
    if g_base - pullback(g_base, T_A) != f_A:
        raise InvalidBaseSolution("g_A does not solve the induced equation on the bases")

    branches: List[Branch] = []
    pieces = []
    covered = []
    for tower in towers:
        taus = tower.iterates()
        sums = tower.running_sums(f)
        for j, tau in enumerate(taus):
            level_value = (g_base - sums[j]).restrict(tower.base)
            pieces.extend(pullback(level_value, invert(tau)).pieces)
        branches.extend(tower.map.branches)
        branches.extend(compose(T_A, invert(taus[-1])).branches)
        covered.extend(tower.union())
    branches.extend(PiecewiseTranslation.identity(IntervalSet(covered).complement()).branches)
    T = PiecewiseTranslation(branches)
    g = StepFunction(pieces)
    logger.debug("extended coboundary over %s towers", len(towers))
    return T, g


### bounded construction ###

@dataclass(frozen=True)
class StageState:
    stage_index: int
    transformation: PiecewiseTranslation
    residual: IntervalSet
    residual_measure_bound: Fraction
    transfer: StepFunction
    towers: Tuple[Tower, ...]

    @property
    def tower(self) -> Tower:
        return self.towers[0]


def _expand_stage(previous: Tower, partition: PubPartition, order: List[int]) -> Tower:
    """Stack the new cells in order, running each reserved cell up the previous tower."""
    taus = previous.iterates()
    levels: List[IntervalSet] = []
    branches: List[Branch] = []
    for position, k in enumerate(order):
        cell = partition.cells[k]
        if k < partition.reserved_cells:
            run = [tau.restrict(cell) for tau in taus]
            levels.extend(step.image() for step in run)
            for lower, upper in zip(run, run[1:]):
                branches.extend(compose(upper, invert(lower)).branches)
            exit_map = invert(run[-1])
        else:
            levels.append(cell)
            exit_map = PiecewiseTranslation.identity(cell)
        if position + 1 < len(order):
            following = partition.cells[order[position + 1]]
            branches.extend(compose(PiecewiseTranslation.matching(cell, following), exit_map).branches)
    return Tower(tuple(levels), PiecewiseTranslation(branches))


def _stage_transfer(f: StepFunction, tower: Tower, leftover: IntervalSet,
                    centre: Fraction) -> StepFunction:
    identity = PiecewiseTranslation.identity(tower.base)
    _, g = extend_coboundary(f, [tower], identity, StepFunction.indicator(tower.base, centre))
    return g + StepFunction.indicator(leftover, centre)


def construct_bounded_solution(f: StepFunction,
                               delta,
                               stages: int,
                               close_residual: bool = True,
                               refine_partitions: bool = False
                               ) -> Tuple[SolutionCertificate, List[StageState]]:
    """
    Build T and g with f = g - g∘T and |g| <= |f|_inf + delta.

    Stage 1 is a balanced uniform tower over [0,1) with leftover set B_1.
    Stage n+1 re-towers B_n together with the base of stage n: the base is
    cut into cells that each run up the whole stage-n tower, and the cells
    of B_n are stacked greedily after them. With close_residual the last
    leftover set gets its own finite tower solution, so the certificate is
    exact on [0,1); otherwise T is the identity there.
    """
    if not isinstance(f, StepFunction):
        raise NonFiniteStep(f"expected a finite step function, got {type(f).__name__}")
    delta = Fraction(delta)
    if delta <= 0:
        raise InvalidParameter("delta", delta, "must be positive")
    if stages < 1:
        raise InvalidParameter("stages", stages, "must be a positive integer")
    total = integral(f)
    if total != 0:
        raise UnbalancedInput(total)
    if f.is_zero():
        certificate = verify(f, PiecewiseTranslation.identity(), StepFunction.zero())
        return certificate, []

    unit = IntervalSet.unit()
    scale = min(delta, Fraction(1))
    Q = dyadic_partition(1) if refine_partitions else None
    tower, partition = _tub_tower(f, unit, scale / 2, Q=Q)
    leftover = partition.exceptional
    states: List[StageState] = []
    previous_residual = IntervalSet.empty()

    for stage in range(1, stages + 1):
        if stage > 1:
            rest = f.restrict(leftover)
            if rest.is_zero():
                logger.info("stage %s: nothing left to re-tower", stage)
                break
            epsilon = scale / 2 ** stage
            Q = dyadic_partition(stage) if refine_partitions else None
            region = leftover.union(tower.base)
            partition = build_pub_partition(rest, region, epsilon, Q, reserve=tower.base)
            integrals = [value * cell.measure for value, cell in zip(partition.values, partition.cells)]
            order = _greedy_order(integrals)
            tower = _expand_stage(tower, partition, order)
            leftover = partition.exceptional
        residual = leftover.union(tower.top)
        bound = residual.union(previous_residual).measure
        centre = _centre([tower], f)
        transfer = _stage_transfer(f, tower, leftover, centre)
        states.append(StageState(stage, tower.map, residual, bound, transfer, (tower,)))
        logger.info("stage %s: tower height %s, leftover %s, beta %s",
                    stage, tower.height, leftover.measure, bound)
        previous_residual = residual

    towers = [tower]
    rest = f.restrict(leftover)
    if close_residual and not leftover.is_empty:
        finishing = decompose_bounded(rest, itertools.repeat(scale / 2 ** (len(states) + 1)))
        towers.extend(finishing)
        covered = IntervalSet(i for t in finishing for i in t.union())
        idle = leftover.difference(covered)
        if not idle.is_empty:
            towers.append(Tower((idle,), PiecewiseTranslation(())))
        fixed = IntervalSet.empty()
    else:
        fixed = leftover

    centre = _centre(towers, f)
    A = IntervalSet(i for t in towers for i in t.base)
    T_A = PiecewiseTranslation.rotate_within(A, tower.base.measure)
    T, g = extend_coboundary(f, towers, T_A, StepFunction.indicator(A, centre))
    g = g + StepFunction.indicator(fixed, centre)

    expected = fixed.intersection(f.support()).complement()
    result = verify(f, T, g, on=expected)
    if isinstance(result, Refutation):
        raise ConstructionError(f"constructed solution fails on measure {result.witness_measure}")
    beta_total = sum((s.residual_measure_bound for s in states), ZERO)
    if close_residual and result.residual_bound != 0:
        raise ConstructionError("closed construction left a residual")
    if result.residual_bound > max(beta_total, fixed.measure):
        raise ConstructionError("residual exceeds the accumulated stage bounds")
    if result.sup_bound > f.sup_norm() + delta:
        raise ConstructionError(f"transfer bound {result.sup_bound} exceeds |f| + delta")
    logger.info("bounded solution: %s stages, |g| = %s, residual %s",
                len(states), result.sup_bound, result.residual_bound)
    return result, states


### L^{p-1} construction ###

@dataclass(frozen=True)
class BandReport:
    index: int
    positive_scale: Fraction
    negative_scale: Fraction
    epsilon: Fraction
    delta: Fraction
    measure: Fraction
    sup_transfer: Fraction
    bound: Fraction
    power_integral: Bracket
    balancing_floor: Fraction


@dataclass(frozen=True)
class LpReport:
    p: Fraction
    bands: Tuple[BandReport, ...]
    transfer_integral: Bracket
    comparison_bound: Bracket
    balancing_floor: Fraction

    @property
    def chain_holds(self) -> bool:
        return self.transfer_integral.upper <= self.comparison_bound.lower


def _band_scale(value: Fraction) -> Fraction:
    size = abs(value)
    if size > 1:
        return Fraction(math.ceil(size))
    return Fraction(1, 2 ** floor_log2(1 / size))


def _pools(atoms):
    pools = {}
    for value, region in atoms:
        pools.setdefault(_band_scale(value), []).append([value, region])
    return [[scale, pools[scale]] for scale in sorted(pools)]


def _carve(pool, fraction):
    taken = []
    for atom in pool:
        head, rest = atom[1].take(atom[1].measure * fraction)
        taken.append([atom[0], head])
        atom[1] = rest
    return taken


def _mass(pool) -> Fraction:
    return sum((abs(value) * region.measure for value, region in pool), ZERO)


def band_split(f: StepFunction) -> List[Tuple[Fraction, Fraction, list, list]]:
    """
    Pair positive and negative values into mean-zero bands.

    Values are grouped by scale (ceil|v| above 1, dyadic below). The lowest
    remaining positive and negative groups are paired, and the heavier one
    gives up a proportional slice of each level set to balance the lighter.
    """
    total = integral(f)
    if total != 0:
        raise UnbalancedInput(total)
    atoms = [(v, r) for v, r in f.atoms() if v != 0]
    positive = _pools([a for a in atoms if a[0] > 0])
    negative = _pools([a for a in atoms if a[0] < 0])
    bands = []
    while positive and negative:
        (k, xs), (l, ys) = positive[0], negative[0]
        mass_x, mass_y = _mass(xs), _mass(ys)
        if mass_x == mass_y:
            band_x, band_y = xs, ys
            positive.pop(0)
            negative.pop(0)
        elif mass_x > mass_y:
            band_x, band_y = _carve(xs, mass_y / mass_x), ys
            negative.pop(0)
        else:
            band_x, band_y = xs, _carve(ys, mass_x / mass_y)
            positive.pop(0)
        bands.append((k, l, band_x, band_y))
    if positive or negative:
        raise ConstructionError("band pairing left unmatched mass")
    logger.info("band split: %s bands", len(bands))
    return bands


def construct_lp_solution(f: StepFunction,
                          p,
                          delta_schedule: Optional[Sequence] = None,
                          stages: int = 1,
                          delta=Fraction(1, 2)) -> Tuple[SolutionCertificate, LpReport]:
    """
    Solve f = g - g∘T band by band so that |g|^(p-1) is controlled by |f|.

    Each band is cut into two-valued towers; the induced function on their
    bases vanishes, so the base solution is a rotation of the bases with a
    constant transfer chosen to centre the running sums.
    """
    p = Fraction(p)
    if p < 1:
        raise InvalidParameter("p", p, "must be at least 1")
    delta = Fraction(delta)
    bands = band_split(f)
    branches: List[Branch] = []
    pieces = []
    reports = []
    carriers = []
    floors = []
    for index, (k, l, xs, ys) in enumerate(bands):
        if delta_schedule is not None:
            if index >= len(delta_schedule):
                raise InvalidParameter("delta_schedule", len(delta_schedule),
                                       f"needs an entry for band {index}")
            epsilon = Fraction(delta_schedule[index])
        else:
            epsilon = delta / 2 ** (index + 1)
        largest = max(k, l)
        band_delta = epsilon / (2 * (largest + epsilon))
        carrier = IntervalSet(i for _, region in xs + ys for i in region)
        f_band = f.restrict(carrier)
        towers = decompose_bounded(f_band, itertools.repeat(epsilon))
        A = IntervalSet(i for t in towers for i in t.base)
        base_certificate, _ = construct_bounded_solution(
            induced_function(f_band, towers), band_delta, stages)
        centre = _centre(towers, f_band)
        T_A = base_certificate.transformation.restrict(A)
        g_A = base_certificate.transfer.restrict(A) + StepFunction.indicator(A, centre)
        T_band, g_band = extend_coboundary(f_band, towers, T_A, g_A)
        branches.extend(T_band.restrict(carrier).branches)
        g_band = g_band.restrict(carrier)
        pieces.extend(g_band.pieces)
        carriers.append(carrier)

        sup_x = max(abs(v) for v, _ in xs)
        sup_y = max(abs(v) for v, _ in ys)
        light = ys if sup_x >= sup_y else xs
        floor = min(abs(v) for v, _ in light)
        floors.append(floor)
        reports.append(BandReport(index, k, l, epsilon, band_delta, carrier.measure,
                                  g_band.sup_norm(), largest + epsilon,
                                  power_integral(g_band, p - 1), floor))
        logger.info("band %s: k=%s l=%s, |g| <= %s", index, k, l, g_band.sup_norm())

    idle = IntervalSet(i for c in carriers for i in c).complement()
    branches.extend(PiecewiseTranslation.identity(idle).branches)
    T = PiecewiseTranslation(branches)
    g = StepFunction(pieces)
    result = verify(f, T, g)
    if isinstance(result, Refutation):
        raise ConstructionError(f"banded solution fails on measure {result.witness_measure}")

    floor = min(floors) if floors else Fraction(1)
    transfer_integral = power_integral(g, p - 1)
    comparison = (power_bracket(2, p - 1) * power_integral(f, p - 1)
                  + power_bracket(2, p) * power_integral(f, p) * Bracket.exact(1 / floor))
    report = LpReport(p, tuple(reports), transfer_integral, comparison, floor)
    logger.info("L^(p-1) chain: %s <= %s", transfer_integral, comparison)
    return result, report


### solvability ###

class Solvability(Enum):
    BALANCED_FINITE = "BalancedFinite"
    BALANCED_INFINITE = "BalancedInfinite"
    UNBALANCED = "Unbalanced"


def one_sided_integrals(f: StepFunction) -> Tuple[Fraction, Fraction]:
    return integral(f.positive_part()), integral(f.negative_part())


def check_solvability(f: StepFunction) -> Solvability:
    """Balanced one-sided integrals decide whether some (T, g) exists."""
    positive, negative = one_sided_integrals(f)
    if positive == negative:
        return Solvability.BALANCED_FINITE
    return Solvability.UNBALANCED
