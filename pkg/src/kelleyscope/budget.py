"""Default search/enumeration budgets, overridable through ``KELLEYSCOPE_BUDGET``."""

from __future__ import annotations

import os

from .errors import DomainError

ENV_VAR = "KELLEYSCOPE_BUDGET"

# multisets enumerated by the brute-force intersection oracle
BRUTEFORCE_BUDGET = 2_000_000
# nodes (feasibility checks + branch-and-bound nodes) of the exact cover search
COVER_BUDGET = 200_000


def resolve(explicit: int | None, default: int) -> int:
    """Explicit argument wins, then the environment override, then ``default``."""
    if explicit is not None:
        return explicit
    env = os.environ.get(ENV_VAR)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"{ENV_VAR}: expected an integer, got {env!r}") from None
        if value < 0:
            raise DomainError(f"{ENV_VAR}: budget must be nonnegative")
        return value
    return default
