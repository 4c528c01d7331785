"""
The class G^p_n of step functions with a heavy positive spike and a thin negative tail.

f is a member of G^p_n when some i > n has

    mu{f > a_i}      > 1 / (a_i^p i^2)
    mu{f < -a_{i-1}} < 1 / (a_{i+1}^p i^2)

for a fast-growing sequence a. Members have no transfer function in L^q
for q > p - 1; this module checks membership, pushes arbitrary mean-zero
functions into the class, measures how open the class is around a member,
and evaluates the lower bounds that drive the non-integrability argument.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .counterexamples import AuditEntry, CounterexampleSpec, Family
from .errors import (
    InfeasibleEpsilon,
    InvalidExponents,
    InvalidParameter,
    InvalidWitness,
    UnbalancedInput,
)
from .exact import BinaryScaled, Bracket, power_bracket
from .growth import MAX_MATERIALIZED_BITS, GrowthSequence
from .measure_core import IntervalSet, StepFunction, integral
from .norms import power_integral

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GpAuditRow:
    i: int
    v_measure: Fraction
    v_threshold: BinaryScaled
    u_measure: Fraction
    u_threshold: BinaryScaled
    passed: bool


@dataclass(frozen=True)
class GpVerdict:
    member: bool
    witness: Optional[int]
    rows: Tuple[GpAuditRow, ...]

    @property
    def boundary_witness(self) -> bool:
        """The witness is the first admissible index n + 1."""
        return self.member and self.rows[0].i == self.witness


def _above(f: StepFunction, level: BinaryScaled) -> IntervalSet:
    return f.where(lambda v: level.compare(v) < 0)


def _below(f: StepFunction, level: BinaryScaled) -> IntervalSet:
    return f.where(lambda v: level.compare(-v) < 0)


def v_threshold(a: GrowthSequence, p, i: int) -> BinaryScaled:
    return 1 / (a.power(i, p) * (i * i))


def u_threshold(a: GrowthSequence, p, i: int) -> BinaryScaled:
    return 1 / (a.power(i + 1, p) * (i * i))


def gp_row(f: StepFunction, p, i: int, a: GrowthSequence) -> GpAuditRow:
    v_measure = _above(f, a.value(i)).measure
    u_measure = _below(f, a.value(i - 1)).measure
    v_thr, u_thr = v_threshold(a, p, i), u_threshold(a, p, i)
    passed = v_thr.compare(v_measure) < 0 and u_thr.compare(u_measure) > 0
    return GpAuditRow(i, v_measure, v_thr, u_measure, u_thr, passed)


def gp_membership(f: StepFunction, p, n: int, a: GrowthSequence, i_max: int) -> GpVerdict:
    """Search i in (n, i_max] for a membership witness; rows cover every index tried."""
    p = Fraction(p)
    if n < 1:
        raise InvalidParameter("n", n, "must be positive")
    rows = []
    for i in range(n + 1, i_max + 1):
        row = gp_row(f, p, i, a)
        rows.append(row)
        if row.passed:
            if i == n + 1:
                logger.info("G_p witness at the first admissible index %s", i)
            return GpVerdict(True, i, tuple(rows))
    return GpVerdict(False, None, tuple(rows))


### densification ###

@dataclass(frozen=True)
class DensifyAudit:
    i0: int
    i1: int
    y_measure: Fraction
    v_measure: Fraction
    u_measure: Fraction
    terms: Dict[str, Bracket]
    distance_p: Bracket
    epsilon_p: Bracket

    @property
    def passed(self) -> bool:
        return self.distance_p.upper < self.epsilon_p.lower


def _slice_every_atom(f: StepFunction, share: Fraction) -> IntervalSet:
    """A set Y taking the same share of every level set of f, so the integral over Y is share * integral."""
    parts = []
    for _, region in f.atoms():
        head, _ = region.take(region.measure * share)
        parts.extend(head)
    return IntervalSet(parts)


def _first_index_above(a: GrowthSequence, start: int, bound: Fraction) -> int:
    i = start
    while a.value(i).compare(bound) <= 0:
        i += 1
    return i


def gp_densify(f: StepFunction, p, n: int, epsilon,
               a: GrowthSequence) -> Tuple[StepFunction, DensifyAudit]:
    """
    Modify f on a tiny set Y so that the result is in G^p_n and within epsilon in L^p.

    Y takes the same share of every level set of f, so the integral over Y
    vanishes. On Y the new function is 2 a_{i1} on a leading part V with
    mu(V) = 2 / (a_{i1}^p i1^2) and -a_{i1-1}/2 on the rest U, sized so
    the mean stays zero.
    """
    p, epsilon = Fraction(p), Fraction(epsilon)
    if p <= 0:
        raise InvalidParameter("p", p, "must be positive")
    if epsilon <= 0:
        raise InvalidParameter("epsilon", epsilon, "must be positive")
    total = integral(f)
    if total != 0:
        raise UnbalancedInput(total)

    i0 = _first_index_above(a, n + 1, f.sup_norm())
    i1 = max(i0 + 1, p.denominator, 2)
    third = epsilon / 3
    while power_bracket(2, p + 2).upper / (i1 * i1) >= third:
        i1 += 1
    epsilon_p = power_bracket(epsilon, p)

    while True:
        if a.value(i1 + 1).exponent > MAX_MATERIALIZED_BITS:
            raise InfeasibleEpsilon(
                f"epsilon={epsilon} needs index {i1}; a_{i1 + 1} is too large to write out")
        spike = 2 * a.materialize(i1)
        dip = a.materialize(i1 - 1) / 2
        v_measure = 2 / (a.power(i1, p).to_fraction() * i1 * i1)
        u_measure = spike * v_measure / dip
        y_measure = v_measure + u_measure
        if y_measure >= 1:
            raise InfeasibleEpsilon(f"spike set of measure {y_measure} does not fit")
        Y = _slice_every_atom(f, y_measure)
        V, U = Y.take(v_measure)
        modified = (f.restrict(Y.complement())
                    + StepFunction.indicator(V, spike)
                    + StepFunction.indicator(U, -dip))
        distance = power_integral(f - modified, p)
        if distance.upper < epsilon_p.lower:
            break
        logger.warning("densify: distance %s not below epsilon^p at i1=%s, bumping", distance, i1)
        i1 += 1

    terms = {
        "slice": power_integral(f.restrict(Y), p),
        "spike": power_bracket(spike, p).scale(v_measure),
        "dip": power_bracket(dip, p).scale(u_measure),
    }
    audit = DensifyAudit(i0, i1, y_measure, v_measure, u_measure, terms, distance, epsilon_p)
    logger.info("densify: i0=%s i1=%s mu(Y)=%s", i0, i1, y_measure)
    return modified, audit


def generic_gp_generate(f: StepFunction, p, n: int, epsilon,
                        a: GrowthSequence) -> CounterexampleSpec:
    """Densify f and package the result with its audit trail, including the row at i1."""
    f1, audit = gp_densify(f, p, n, epsilon, a)
    row = gp_row(f1, p, audit.i1, a)
    mean = integral(f1)
    entries = (
        AuditEntry("distance_p", audit.distance_p, audit.passed, "below epsilon^p"),
        AuditEntry("mean_zero", mean, mean == 0, ""),
        AuditEntry("witness_row", row, row.passed, f"index {audit.i1}"),
    )
    parameters = {"p": Fraction(p), "n": n, "epsilon": Fraction(epsilon),
                  "i0": audit.i0, "i1": audit.i1, "densify": audit}
    return CounterexampleSpec(Family.GENERIC_GP, parameters, f1, entries)


### openness ###

@dataclass(frozen=True)
class OpennessWitness:
    i: int
    a_prime: Fraction
    a_double_prime: Fraction
    mu_prime: Fraction
    nu_prime: Fraction


def openness_witness(f: StepFunction, p, i: int, a: GrowthSequence) -> OpennessWitness:
    """
    Interior witness data for a member f at index i.

    a' sits halfway between a_i and the smallest value of f above it, a''
    halfway between a_{i-1} and the largest |value| of f in [-a_{i-1}, 0),
    and mu', nu' halfway between the measured sets and their thresholds.
    """
    p = Fraction(p)
    row = gp_row(f, p, i, a)
    if not row.passed:
        raise InvalidWitness(f"f is not a member at index {i}")
    a_i, a_prev = a.materialize(i), a.materialize(i - 1)
    above = [v for v in f.values() if v > a_i]
    shallow = [-v for v in f.values() if -a_prev <= v < 0]
    if shallow and max(shallow) == a_prev:
        raise InvalidWitness(f"f takes the value -a_{i - 1} exactly")
    a_prime = (a_i + min(above)) / 2
    a_double_prime = (a_prev + max(shallow, default=Fraction(0))) / 2
    mu_prime = (row.v_measure + row.v_threshold.to_fraction()) / 2
    nu_prime = (row.u_measure + row.u_threshold.to_fraction()) / 2
    return OpennessWitness(i, a_prime, a_double_prime, mu_prime, nu_prime)


def gp_openness_radius(f: StepFunction, p, witness: OpennessWitness, a: GrowthSequence) -> Fraction:
    """
    Radius in L^p (as a bound on the p-th power of the distance) that keeps f in the class.

    min{(mu' - 1/(a_i^p i^2)) (a' - a_i)^p, (1/(a_{i+1}^p i^2) - nu') (a_{i-1} - a'')^p},
    each power rounded down.
    """
    p = Fraction(p)
    i = witness.i
    a_i, a_prev = a.materialize(i), a.materialize(i - 1)
    v_thr = v_threshold(a, p, i).to_fraction()
    u_thr = u_threshold(a, p, i).to_fraction()
    if not witness.a_prime > a_i:
        raise InvalidWitness("need a' > a_i")
    if not witness.a_double_prime < a_prev:
        raise InvalidWitness("need a'' < a_{i-1}")
    if not witness.mu_prime > v_thr:
        raise InvalidWitness("need mu' above the spike threshold")
    if not witness.nu_prime < u_thr:
        raise InvalidWitness("need nu' below the tail threshold")
    if f.where(lambda v: v > witness.a_prime).measure < witness.mu_prime:
        raise InvalidWitness("mu{f > a'} is smaller than mu'")
    if f.where(lambda v: v < -witness.a_double_prime).measure > witness.nu_prime:
        raise InvalidWitness("mu{f < -a''} is larger than nu'")
    first = (witness.mu_prime - v_thr) * power_bracket(witness.a_prime - a_i, p).lower
    second = (u_thr - witness.nu_prime) * power_bracket(a_prev - witness.a_double_prime, p).lower
    return min(first, second)


### lower bounds ###

def core_lower_bound(p, q, n: int, a: GrowthSequence, case: int) -> BinaryScaled:
    """
    Lower bound on the integral of |g|^q forced at stage n.

    case 1: a_n^(q+1-p) / (32 * 4^q * a_{n-1} * n^2)
    case 2: a_n^(kq-p) / (n^2 * 4^q * a_{n-1}^(q(k-1))), k the least integer > 1 with kq > p
    """
    p, q = Fraction(p), Fraction(q)
    if q <= p - 1:
        raise InvalidExponents(f"need q > p - 1, got p={p}, q={q}")
    if n < 2:
        raise InvalidParameter("n", n, "needs a_{n-1}, so n >= 2")
    four_q = BinaryScaled.power_of_two(2 * q)
    if case == 1:
        return a.value(n) ** (q + 1 - p) / (four_q * 32 * a.value(n - 1) * (n * n))
    if case == 2:
        k = max(2, math.floor(p / q) + 1)
        return a.value(n) ** (k * q - p) / (four_q * (n * n) * a.value(n - 1) ** (q * (k - 1)))
    raise InvalidParameter("case", case, "must be 1 or 2")
