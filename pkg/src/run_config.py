"""
RunConfig: one CLI invocation, validated before anything is built.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .errors import InvalidParameter
from .verbosity_options import VERBOSITY_OPTIONS

COMMANDS = (
    "construct", "construct-lp", "verify", "schmidt", "gp-audit",
    "gen-gp", "gen-moment", "gen-kwapien", "solvable",
)

REQUIRED_INPUTS = {
    "construct": ("f",),
    "construct-lp": ("f",),
    "verify": ("f",),
    "schmidt": ("f", "t"),
    "gp-audit": ("f",),
    "gen-gp": (),
    "gen-moment": (),
    "gen-kwapien": (),
    "solvable": ("f",),
}

CSV_COMMANDS = ("construct", "construct-lp", "schmidt", "gp-audit")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: Mapping[str, Optional[str]] = field(default_factory=dict)
    params: Mapping[str, object] = field(default_factory=dict)
    out: Optional[str] = None
    fmt: str = "json"
    verbosity: int = 1

    def input(self, name) -> Optional[str]:
        return self.inputs.get(name)

    def param(self, name, default=None):
        value = self.params.get(name)
        return default if value is None else value

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise InvalidParameter("command", self.command, f"must be one of {', '.join(COMMANDS)}")
        if self.fmt not in ("json", "csv"):
            raise InvalidParameter("--format", self.fmt, "must be json or csv")
        if self.fmt == "csv" and self.command not in CSV_COMMANDS:
            raise InvalidParameter("--format", self.fmt, f"{self.command} only writes json")
        if self.verbosity not in VERBOSITY_OPTIONS:
            raise InvalidParameter("--verbosity", self.verbosity, "must be 1, 2 or 3")
        for name in REQUIRED_INPUTS[self.command]:
            if not self.input(name):
                raise InvalidParameter(f"--{name}", None, f"required by {self.command}")
        if self.command == "verify" and not self.input("cert"):
            if not (self.input("t") and self.input("g")):
                raise InvalidParameter("--t/--g", None, "verify needs --t and --g, or --cert")
        self._check_ranges()
        return self

    def _check_ranges(self):
        positive = ("delta", "epsilon")
        for name in positive:
            value = self.params.get(name)
            if value is not None and Fraction(value) <= 0:
                raise InvalidParameter(f"--{name}", value, "must be positive")
        for name in ("stages", "n", "n_max", "i_max"):
            value = self.params.get(name)
            if value is not None and int(value) < 1:
                raise InvalidParameter(f"--{name.replace('_', '-')}", value, "must be a positive integer")
        depth = self.params.get("depth")
        if depth is not None and int(depth) < 0:
            raise InvalidParameter("--depth", depth, "must be non-negative")
        p = self.params.get("p")
        if p is not None:
            if self.command in ("gp-audit", "gen-gp"):
                if Fraction(p) <= 0:
                    raise InvalidParameter("--p", p, "must be positive")
            else:
                floor = 2 if self.command == "gen-kwapien" else 1
                if Fraction(p) < floor:
                    raise InvalidParameter("--p", p, f"must be at least {floor}")
        r = self.params.get("r")
        if r is not None and p is not None and not Fraction(r) > Fraction(p) - 1:
            raise InvalidParameter("--r", r, "must exceed p - 1")
        if self.command == "gen-kwapien" and self.params.get("depth") is not None and int(self.params["depth"]) < 1:
            raise InvalidParameter("--depth", self.params["depth"], "must be positive")
        if self.command == "schmidt" and not self.params.get("thresholds"):
            raise InvalidParameter("--thresholds", None, "need at least one threshold")
