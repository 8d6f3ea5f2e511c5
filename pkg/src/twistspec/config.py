"""Runtime limits shared by the library and the command line."""

import os

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "IHARA_BUDGET"


def default_budget() -> int:
    """Budget from ``IHARA_BUDGET`` if set, else 10^7."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    value = int(raw)
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value
