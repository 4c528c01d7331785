"""
Exception hierarchy for coboundary-lab.

Every failure raised by the library derives from CoboundaryError so callers
(and the CLI) can separate mathematical negatives from crashes.
"""


class CoboundaryError(Exception):
    """Base class for all library errors"""


### measure-core ###

class PointOutsideDomain(CoboundaryError):
    def __init__(self, x):
        super().__init__(f"point {x} is not covered by any branch")
        self.x = x


class DomainMismatch(CoboundaryError):
    pass


class NotBijective(CoboundaryError):
    pass


class BranchLimitExceeded(CoboundaryError):
    def __init__(self, count, limit, what="branches"):
        super().__init__(
            f"{count} {what} exceeds the cap of {limit} "
            f"(raise COBOUNDARY_MAX_BRANCHES to allow more)"
        )
        self.count = count
        self.limit = limit


### towers / solver ###

class DegenerateInput(CoboundaryError):
    pass


class UnbalancedInput(CoboundaryError):
    def __init__(self, integral, where="[0,1)"):
        super().__init__(f"function is not mean-zero on {where}: integral = {integral}")
        self.integral = integral


class NotTwoStep(CoboundaryError):
    pass


class InvalidBaseSolution(CoboundaryError):
    pass


class NonFiniteStep(CoboundaryError):
    pass


class ConstructionError(CoboundaryError):
    """An invariant checked at build time did not hold"""


### analysis ###

class InfeasibleEpsilon(CoboundaryError):
    pass


class InvalidParameter(CoboundaryError, ValueError):
    def __init__(self, name, value, reason):
        super().__init__(f"invalid {name}={value}: {reason}")
        self.name = name
        self.value = value


class InvalidWitness(CoboundaryError, ValueError):
    pass


class InvalidExponents(CoboundaryError, ValueError):
    pass


class TableTooShort(CoboundaryError):
    pass


class SummabilityViolated(CoboundaryError):
    pass


class ExponentNotRepresentable(CoboundaryError):
    pass


### cli / configuration ###

class ParseError(CoboundaryError):
    pass


class ConfigurationError(CoboundaryError):
    pass
