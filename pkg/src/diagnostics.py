"""
Birkhoff-sum diagnostics: exact sums S_n f, Schmidt statistics and D_n search.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import DomainMismatch, InvalidParameter
from .measure_core import IntervalSet, PiecewiseTranslation, StepFunction, _as_set, pullback

logger = logging.getLogger(__name__)

# D_n search assumes eta below this
ETA_CEILING = Fraction(1, 10)


@dataclass(frozen=True)
class BirkhoffReport:
    n: int
    sum_function: StepFunction
    level_stats: Tuple[Tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class DnVerdict:
    member: bool
    witness: Optional[int]
    searched_up_to: int
    exceedance: Fraction


def _require_bijective(T: PiecewiseTranslation):
    if not T.is_bijective():
        raise DomainMismatch("Birkhoff sums need a bijection of [0,1)")


def birkhoff_sums(f: StepFunction, T: PiecewiseTranslation, n: int):
    """Yield S_1 f, ..., S_n f using S_{k+1} = f + S_k∘T."""
    _require_bijective(T)
    current = StepFunction.zero()
    for _ in range(n):
        current = f + pullback(current, T)
        yield current


def _measure_within(S: StepFunction, bound, region: IntervalSet) -> Fraction:
    return S.where(lambda v: abs(v) <= bound, within=region).measure


def birkhoff(f: StepFunction, T: PiecewiseTranslation, n: int,
             thresholds: Sequence = ()) -> BirkhoffReport:
    if n < 1:
        raise InvalidParameter("n", n, "must be positive")
    total = None
    for total in birkhoff_sums(f, T, n):
        pass
    unit = IntervalSet.unit()
    stats = tuple((Fraction(M), _measure_within(total, Fraction(M), unit)) for M in thresholds)
    return BirkhoffReport(n, total, stats)


def schmidt_profile(f: StepFunction, T: PiecewiseTranslation, thresholds: Sequence,
                    n_max: int, within=None) -> List[Tuple[int, Fraction, Fraction]]:
    """Rows (n, M, mu{|S_n f| <= M}) for n = 1..n_max, relative to `within`."""
    region = _as_set(within)
    if region.measure == 0:
        raise InvalidParameter("within", region, "must have positive measure")
    rows = []
    for n, S in enumerate(birkhoff_sums(f, T, n_max), start=1):
        for M in thresholds:
            M = Fraction(M)
            rows.append((n, M, _measure_within(S, M, region) / region.measure))
    return rows


def schmidt_statistic(f: StepFunction, T: PiecewiseTranslation, M, n_max: int,
                      within=None) -> Fraction:
    """min over n <= n_max of mu{|S_n f| <= M}; 1 minus this is the best delta seen."""
    if n_max < 1:
        raise InvalidParameter("n_max", n_max, "must be positive")
    rows = schmidt_profile(f, T, [M], n_max, within)
    statistic = min(measure for _, _, measure in rows)
    logger.debug("Schmidt statistic at M=%s up to n=%s: %s", M, n_max, statistic)
    return statistic


def dn_membership(f: StepFunction, T: PiecewiseTranslation, n: int, eta,
                  k_max: int) -> DnVerdict:
    """First k in (n, k_max] with mu{|S_k f| > n} > eta."""
    eta = Fraction(eta)
    if not 0 < eta < ETA_CEILING:
        raise InvalidParameter("eta", eta, "must lie in (0, 1/10)")
    if n < 1:
        raise InvalidParameter("n", n, "must be positive")
    largest = Fraction(0)
    for k, S in enumerate(birkhoff_sums(f, T, k_max), start=1):
        if k <= n:
            continue
        exceed = S.where(lambda v: abs(v) > n).measure
        largest = max(largest, exceed)
        if exceed > eta:
            return DnVerdict(True, k, k_max, exceed)
    return DnVerdict(False, None, k_max, largest)
