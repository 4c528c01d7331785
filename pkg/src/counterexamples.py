"""
Generators for two families of mean-zero functions with badly behaved transfer functions.

    * not_a_moment_generate: f = 1_A - sum b_i 1_{B_i}, where b_i outruns a
      given growth function phi, so no transfer function has a finite
      phi-moment.
    * kwapien_generate: f = sum 2 N_k^(1-delta) 1_{E_k} - 1_{E_0}, in L^p
      with every transfer function outside L^r.

Both carry an audit trail of exact (or direction-safe) checks.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import (
    ConstructionError,
    ExponentNotRepresentable,
    InvalidParameter,
    SummabilityViolated,
    TableTooShort,
)
from .exact import BinaryScaled, Bracket, exact_power, power_bracket
from .measure_core import Interval, StepFunction, integral

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class Family(Enum):
    GENERIC_GP = "GenericGp"
    NOT_A_MOMENT = "NotAMoment"
    KWAPIEN = "Kwapien"


@dataclass(frozen=True)
class AuditEntry:
    condition: str
    value: object
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CounterexampleSpec:
    family: Family
    parameters: Dict[str, object]
    function: StepFunction
    audit: Tuple[AuditEntry, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(entry.passed for entry in self.audit)

    def entry(self, condition: str) -> AuditEntry:
        for item in self.audit:
            if item.condition == condition:
                return item
        raise KeyError(condition)


### not a moment ###

def log2_table(max_exponent: int) -> List[Tuple[Fraction, Fraction]]:
    """(2^e, e) for e = 0..max_exponent: phi = log2 on powers of two."""
    return [(Fraction(2) ** e, Fraction(e)) for e in range(max_exponent + 1)]


def _table_floor(table, y: BinaryScaled):
    """Last entry (y0, phi(y0)) with y0 <= y, and whether it is the final entry."""
    best = None
    for position, (y0, phi0) in enumerate(table):
        if y.compare(y0) >= 0:
            best = (y0, phi0, position == len(table) - 1)
    return best


def _choose_exponents(table, depth: int) -> List[int]:
    """Smallest increasing j_i with phi(2^(j_i!) / 4) >= i 2^i, reading phi from the table."""
    exponents = []
    j = 0
    for i in range(1, depth + 1):
        target = i * 2 ** i
        j += 1
        while True:
            quarter = BinaryScaled.power_of_two(math.factorial(j) - 2)
            floor = _table_floor(table, quarter)
            if floor is not None and floor[1] >= target:
                break
            if floor is not None and floor[2]:
                raise TableTooShort(
                    f"phi table ends at {floor[0]} with value {floor[1]} < {target} needed for b_{i}")
            j += 1
        exponents.append(j)
    return exponents


def not_a_moment_generate(phi_table: Sequence[Tuple], depth: int,
                          alpha=HALF) -> CounterexampleSpec:
    """
    f = 1_A - sum_{i <= depth} b_i 1_{B_i} with mu(A) = 1/2 and mu(B_i) = 1/(b_i 2^(i+1)).

    b_i = 2^(j_i!) with j_i the least admissible exponent above j_{i-1} such
    that phi(b_i / 4) >= i 2^i, where phi is read from a nondecreasing table.
    The truncated function has mean 2^-(depth+1).
    """
    if depth < 0:
        raise InvalidParameter("depth", depth, "must be non-negative")
    table = sorted((Fraction(y), Fraction(v)) for y, v in phi_table)
    if depth > 0 and not table:
        raise TableTooShort("empty phi table")
    if any(b[1] < a[1] for a, b in zip(table, table[1:])):
        raise InvalidParameter("phi_table", "values", "must be nondecreasing in y")
    exponents = _choose_exponents(table, depth) if depth else []
    b = [Fraction(2) ** math.factorial(j) for j in exponents]

    pieces = [(Interval(0, HALF), 1)]
    cursor = HALF
    measures = []
    for i, b_i in enumerate(b, start=1):
        measure = 1 / (b_i * 2 ** (i + 1))
        measures.append(measure)
        pieces.append((Interval(cursor, cursor + measure), -b_i))
        cursor += measure
    f = StepFunction(pieces)

    audit = []
    alpha = Fraction(alpha)
    scaled = [BinaryScaled.power_of_two(math.factorial(j)) for j in exponents]
    ratios = [scaled[k] / scaled[k + 1] ** alpha for k in range(len(scaled) - 1)]
    decreasing = all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
    audit.append(AuditEntry("growth_prefix", [str(r) for r in ratios], decreasing,
                            f"b_i / b_(i+1)^{alpha} decreasing on the prefix"))
    for i, j in enumerate(exponents, start=1):
        floor = _table_floor(table, BinaryScaled.power_of_two(math.factorial(j) - 2))
        audit.append(AuditEntry(f"phi_bound_{i}", floor[1], floor[1] >= i * 2 ** i,
                                f"phi(b_{i}/4) >= {i * 2 ** i}"))
    for i, (b_i, measure) in enumerate(zip(b, measures), start=1):
        audit.append(AuditEntry(f"measure_{i}", measure, b_i * measure == Fraction(1, 2 ** (i + 1)),
                                f"b_{i} mu(B_{i}) = 2^-{i + 1}"))
    tail = HALF - sum((b_i * m for b_i, m in zip(b, measures)), Fraction(0))
    audit.append(AuditEntry("tail_mass", tail, tail == Fraction(1, 2 ** (depth + 1)),
                            "mean of the truncated function"))
    abs_integral = integral(f.abs())
    audit.append(AuditEntry("integrable", abs_integral, abs_integral <= 1, "integral of |f| <= 1"))

    logger.info("not-a-moment example: depth %s, exponents %s", depth, exponents)
    parameters = {"depth": depth, "exponents": exponents, "alpha": alpha}
    return CounterexampleSpec(Family.NOT_A_MOMENT, parameters, f, tuple(audit))


### Kwapien ###

def kwapien_delta(p, r) -> Fraction:
    p, r = Fraction(p), Fraction(r)
    return (1 + r - p) / (2 * (r + 1))


def power_table(exponent_step: int, depth: int) -> List[int]:
    """N_k = 2^(exponent_step * k) for k = 1..depth."""
    return [2 ** (exponent_step * k) for k in range(1, depth + 1)]


def kwapien_generate(p, r, N_table: Sequence[int], depth: int) -> CounterexampleSpec:
    """
    Build f = f+ - 1_{E_0} with f+ = sum_{k<=depth} 2 N_k^(1-delta) 1_{E_k}.

    mu(E_k) = N_k^-p, delta = (1 + r - p)/(2(r + 1)) and mu(E_0) is the
    integral of f+. The audit checks the summability prefix
    sum N_k^-(delta(r+1)) < 2^-(p+1), the positive mass below 1/2, and
    L_k = n_k * integral over {f > n_k} of (f - n_k)^r >= N_k^((r+1-p)/2)
    with n_k = N_k^(1-delta).
    """
    p, r = Fraction(p), Fraction(r)
    if p < 2:
        raise InvalidParameter("p", p, "must be at least 2")
    if not r > p - 1:
        raise InvalidParameter("r", r, "must exceed p - 1")
    if depth < 1:
        raise InvalidParameter("depth", depth, "must be positive")
    if len(N_table) < depth:
        raise InvalidParameter("N_table", len(N_table), f"needs {depth} entries")
    N = [int(v) for v in N_table[:depth]]
    if any(v <= 0 for v in N) or any(b <= a for a, b in zip(N, N[1:])):
        raise InvalidParameter("N_table", N, "must be positive and strictly increasing")
    delta = kwapien_delta(p, r)

    summability = sum((power_bracket(v, -delta * (r + 1)) for v in N), Bracket.exact(0))
    limit = power_bracket(2, -(p + 1))
    if not summability.upper < limit.lower:
        raise SummabilityViolated(
            f"sum of N_k^-{delta * (r + 1)} is at least {summability.lower}, needs < 2^-{p + 1}")

    try:
        levels = [exact_power(v, 1 - delta) for v in N]
        widths = [exact_power(v, -p) for v in N]
    except ExponentNotRepresentable as e:
        raise ExponentNotRepresentable(f"Kwapien step values must be rational: {e}")
    values = [2 * level for level in levels]
    positive_mass = sum((v * w for v, w in zip(values, widths)), Fraction(0))
    if sum(widths) + positive_mass > 1:
        raise ConstructionError("sets E_k and E_0 do not fit in [0,1)")

    pieces = []
    cursor = Fraction(0)
    for value, width in zip(values, widths):
        pieces.append((Interval(cursor, cursor + width), value))
        cursor += width
    pieces.append((Interval(1 - positive_mass, 1), -1))
    f = StepFunction(pieces)

    audit = [
        AuditEntry("delta", delta, True, "(1 + r - p) / (2(r + 1))"),
        AuditEntry("summability_prefix", summability, True, f"< 2^-({p} + 1)"),
        AuditEntry("positive_mass", positive_mass, positive_mass < HALF, "integral of f+ < 1/2"),
        AuditEntry("mean_zero", integral(f), integral(f) == 0, ""),
    ]
    for k, level in enumerate(levels, start=1):
        excess = Bracket.exact(0)
        for value, width in zip(values, widths):
            if value > level:
                excess = excess + power_bracket(value - level, r).scale(width)
        growth = excess.scale(level)
        target = power_bracket(N[k - 1], (r + 1 - p) / 2)
        audit.append(AuditEntry(f"L_{k}", growth, growth.lower >= target.upper,
                                f"L_{k} >= N_{k}^{(r + 1 - p) / 2}"))

    logger.info("Kwapien example: p=%s r=%s delta=%s depth=%s", p, r, delta, depth)
    parameters = {"p": p, "r": r, "delta": delta, "N": N, "depth": depth}
    return CounterexampleSpec(Family.KWAPIEN, parameters, f, tuple(audit))
