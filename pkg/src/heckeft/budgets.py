"""Enumeration and precision budgets.

All exhaustive searches go through a Budget so that exceeding a bound is a
loud error (exit code 2 from the CLI), never a silent truncation.  Defaults
may be overridden with the HECKEFT_BUDGET and HECKEFT_PREC environment
variables or with explicit CLI flags.
"""

import os
from dataclasses import dataclass

DEFAULT_PRECISION = 60

_PRESETS = {
    "small": 50_000,
    "default": 500_000,
    "large": 5_000_000,
}


@dataclass(frozen=True)
class Budget:
    enumeration: int = 500_000   # max matrices / candidates examined per call
    lattice_points: int = 4      # finite F_q-lattices capped at q**lattice_points
    product_factors: int = 100_000

    def check_enumeration(self, count, what):
        from .errors import BudgetExceededError
        if count > self.enumeration:
            raise BudgetExceededError(
                "%s needs %d candidates, budget is %d" % (what, count, self.enumeration),
                attempted=count,
            )


def from_env(preset=None):
    """Budget from a named preset, with environment overrides applied."""
    cap = _PRESETS.get(preset or "default", _PRESETS["default"])
    env = os.environ.get("HECKEFT_BUDGET")
    if env:
        cap = int(env)
    return Budget(enumeration=cap)


def default_precision():
    env = os.environ.get("HECKEFT_PREC")
    return int(env) if env else DEFAULT_PRECISION


DEFAULT_BUDGET = Budget()
