"""Resource budgets, overridable through environment variables.

Only *budgets* are environment-tunable; mathematical constants are ordinary function
parameters with their literature defaults and are set per call (or per CLI
flag), never through the environment.
"""

from __future__ import annotations

import os

_DEFAULTS = {
    # max (n+1)*(capacity+1) cells for the knapsack DP table
    "CUTRANK_DP_CELLS": 10_000_000,
    # max n for the meet-in-the-middle knapsack
    "CUTRANK_MITM_MAX_N": 40,
    # max n for auto-selected exhaustive knapsack
    "CUTRANK_EXHAUSTIVE_MAX_N": 20,
    # max number of lambda candidates in a certified audit grid
    "CUTRANK_GRID_BUDGET": 2_000_000,
    # max n*(2K+1)^n objective vectors for one closure round
    "CUTRANK_CLOSURE_BUDGET": 200_000,
    # max inequality-subsets examined by vertex enumeration
    "CUTRANK_VERTEX_BUDGET": 2_000_000,
    # cap on the adaptive ell_1 budget of the refutation sweep
    "CUTRANK_SWEEP_MAX_B": 16_384,
}


def _get(name: str) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return _DEFAULTS[name]
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {raw}")
    return value


def dp_cell_budget() -> int:
    return _get("CUTRANK_DP_CELLS")


def mitm_max_n() -> int:
    return _get("CUTRANK_MITM_MAX_N")


def exhaustive_max_n() -> int:
    return _get("CUTRANK_EXHAUSTIVE_MAX_N")


def grid_budget() -> int:
    return _get("CUTRANK_GRID_BUDGET")


def closure_budget() -> int:
    return _get("CUTRANK_CLOSURE_BUDGET")


def vertex_budget() -> int:
    return _get("CUTRANK_VERTEX_BUDGET")


def sweep_max_b() -> int:
    return _get("CUTRANK_SWEEP_MAX_B")
