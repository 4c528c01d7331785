"""
Environment-backed configuration.

Values are resolved on every call to get_settings() so a process (or a test
using monkeypatch.setenv) can change them without reloading modules.
"""
import os
from dataclasses import dataclass

from .errors import BranchLimitExceeded, ConfigurationError

MAX_BRANCHES_VAR = "COBOUNDARY_MAX_BRANCHES"
BRACKET_BITS_VAR = "COBOUNDARY_BRACKET_BITS"

DEFAULT_MAX_BRANCHES = 10 ** 6
DEFAULT_BRACKET_BITS = 64


@dataclass(frozen=True)
class Settings:
    max_branches: int = DEFAULT_MAX_BRANCHES
    bracket_bits: int = DEFAULT_BRACKET_BITS


def _read_positive_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise ConfigurationError(f"{name} must be a positive integer, got {raw!r}")
    if value <= 0:
        raise ConfigurationError(f"{name} must be a positive integer, got {raw!r}")
    return value


def get_settings() -> Settings:
    return Settings(
        max_branches=_read_positive_int(MAX_BRANCHES_VAR, DEFAULT_MAX_BRANCHES),
        bracket_bits=_read_positive_int(BRACKET_BITS_VAR, DEFAULT_BRACKET_BITS),
    )


def check_branch_count(count, what="branches"):
    limit = get_settings().max_branches
    if count > limit:
        raise BranchLimitExceeded(count, limit, what)
