"""Exact 0/1 knapsack oracles: max{ p.x : w.x <= capacity, x in {0,1}^n }.

Three independent methods:

* ``dp`` — pseudo-polynomial suffix table over capacity, auto-selected while
  (n+1)*(capacity+1) fits the cell budget.  Runs on an int64 numpy table when
  profit/weight sums provably fit, otherwise on Python bigint rows.
* ``meet_in_the_middle`` — half-enumeration with a weight-sorted prefix-max
  structure, for n up to ~40 regardless of capacity.
* ``exhaustive`` — full 2^n scan (n <= 25), the ground-truth oracle in tests.

All methods return the same witness: the optimum index set that is smallest
in sequence-lex order on its sorted tuple, so {0,1} beats {1} and {0} beats
{0,1}.  dp and meet_in_the_middle reach it by greedy max-queries (include i
exactly when an optimal completion through i exists and value is still
owed); exhaustive picks it directly among all optimal masks, which keeps it
an independent check of the rule.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import config
from .errors import NegativeProfit, ResourceBudgetExceeded, TooLarge

_INT64_LIMIT = 1 << 62

METHOD_DP = "dp"
METHOD_MITM = "meet_in_the_middle"
METHOD_EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class KnapsackQuery:
    weights: tuple
    capacity: int
    profits: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        p = tuple(int(x) for x in self.profits)
        if len(w) != len(p):
            raise ValueError("weights and profits must have equal length")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if any(x < 0 for x in p):
            raise NegativeProfit("knapsack profits must be nonnegative")
        cap = int(self.capacity)
        if cap < 0:
            raise ValueError("capacity must be nonnegative")
        cap = min(cap, sum(w))  # larger capacities admit everything: clamp
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "profits", p)
        object.__setattr__(self, "capacity", cap)

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class KnapsackResult:
    opt_value: int
    witness: tuple
    method: str


def _int64_safe(weights, profits, capacity) -> bool:
    return (
        sum(weights) < _INT64_LIMIT
        and sum(profits) < _INT64_LIMIT
        and capacity < _INT64_LIMIT
    )


# ---------------------------------------------------------------- witnesses


def _greedy_witness(weights, profits, capacity, best: Callable[[int, int], int]) -> tuple:
    """Lex-smallest optimal index set from a suffix-max oracle.

    best(i, r) must be max profit over subsets of items i.. with weight <= r.
    Invariant: `need` equals best(i, r) entering each step; preferring
    inclusion on ties while value is still owed, and stopping at need == 0,
    is exactly sequence-lex order on sorted index tuples.
    """
    chosen = []
    r = capacity
    need = best(0, capacity)
    for i in range(len(weights)):
        if need == 0:
            break
        if weights[i] <= r and profits[i] + best(i + 1, r - weights[i]) == need:
            chosen.append(i)
            r -= weights[i]
            need -= profits[i]
    return tuple(chosen)


def _lex_min_masks(masks: np.ndarray) -> tuple:
    """Smallest mask in sequence-lex order on sorted index tuples."""
    chosen = []
    cur = masks
    while True:
        if (cur == 0).any():
            return tuple(chosen)  # an exhausted mask is a prefix of the rest
        low = cur & -cur
        b = int(low.min()).bit_length() - 1
        cur = cur[(cur & (1 << b)) != 0] ^ (1 << b)  # others start later: larger
        chosen.append(b)


def _lex_min_masks_py(masks) -> tuple:
    chosen = []
    cur = list(masks)
    while True:
        if any(m == 0 for m in cur):
            return tuple(chosen)
        b = min((m & -m).bit_length() - 1 for m in cur)
        bit = 1 << b
        cur = [m ^ bit for m in cur if m & bit]
        chosen.append(b)


# ----------------------------------------------------------------------- dp


class _SuffixTable:
    """best[i][r] for i in 0..n, r in 0..capacity."""

    def __init__(self, weights, profits, capacity):
        n = len(weights)
        self.capacity = capacity
        if _int64_safe(weights, profits, capacity):
            table = np.zeros((n + 1, capacity + 1), dtype=np.int64)
            for i in range(n - 1, -1, -1):
                wi, pi = weights[i], profits[i]
                row = table[i + 1]
                out = table[i]
                out[:] = row
                if wi == 0:
                    out += pi  # free item: always taken by a maximizer
                elif wi <= capacity:
                    np.maximum(out[wi:], row[: capacity + 1 - wi] + pi, out=out[wi:])
            self._np = table
            self._py = None
        else:
            rows = [[0] * (capacity + 1)]
            for i in range(n - 1, -1, -1):
                wi, pi = weights[i], profits[i]
                prev = rows[0]
                if wi == 0:
                    row = [v + pi for v in prev]
                else:
                    row = prev[:]
                    for r in range(wi, capacity + 1):
                        cand = prev[r - wi] + pi
                        if cand > row[r]:
                            row[r] = cand
                rows.insert(0, row)
            self._np = None
            self._py = rows

    def best(self, i: int, r: int) -> int:
        if r < 0:
            raise ValueError("negative capacity query")
        if self._np is not None:
            return int(self._np[i, r])
        return self._py[i][r]


def _solve_dp(q: KnapsackQuery) -> KnapsackResult:
    table = _SuffixTable(q.weights, q.profits, q.capacity)
    witness = _greedy_witness(q.weights, q.profits, q.capacity, table.best)
    return KnapsackResult(opt_value=table.best(0, q.capacity), witness=witness, method=METHOD_DP)


# --------------------------------------------------------------------- mitm


def _enum_subsets(weights, profits):
    """(weight, profit) of every subset, indexed by bitmask."""
    k = len(weights)
    if _int64_safe(weights, profits, 0):
        w = np.zeros(1 << k, dtype=np.int64)
        p = np.zeros(1 << k, dtype=np.int64)
        for b in range(k):
            lo = 1 << b
            w[lo : 2 * lo] = w[:lo] + weights[b]
            p[lo : 2 * lo] = p[:lo] + profits[b]
        return w, p
    w = [0] * (1 << k)
    p = [0] * (1 << k)
    for m in range(1, 1 << k):
        low = (m & -m).bit_length() - 1
        prev = m & (m - 1)
        w[m] = w[prev] + weights[low]
        p[m] = p[prev] + profits[low]
    return w, p


def _mitm_best(weights, profits, capacity) -> int:
    n = len(weights)
    half = n // 2
    lw, lp = _enum_subsets(weights[:half], profits[:half])
    rw, rp = _enum_subsets(weights[half:], profits[half:])
    if isinstance(rw, np.ndarray):
        order = np.argsort(rw, kind="stable")
        rw_sorted = rw[order]
        rp_best = np.maximum.accumulate(rp[order])
        ok = lw <= capacity
        idx = np.searchsorted(rw_sorted, capacity - lw[ok], side="right") - 1
        return int((lp[ok] + rp_best[idx]).max())
    pairs = sorted(zip(rw, rp))
    rw_sorted = []
    rp_best = []
    run = None
    for wgt, prof in pairs:
        run = prof if run is None else max(run, prof)
        rw_sorted.append(wgt)
        rp_best.append(run)
    best = None
    for wgt, prof in zip(lw, lp):
        if wgt > capacity:
            continue
        j = bisect.bisect_right(rw_sorted, capacity - wgt) - 1
        val = prof + rp_best[j]
        if best is None or val > best:
            best = val
    return best


def _solve_mitm(q: KnapsackQuery) -> KnapsackResult:
    def best(i: int, r: int) -> int:
        return _mitm_best(q.weights[i:], q.profits[i:], r)

    opt = best(0, q.capacity)
    witness = _greedy_witness(q.weights, q.profits, q.capacity, best)
    return KnapsackResult(opt_value=opt, witness=witness, method=METHOD_MITM)


# --------------------------------------------------------------- exhaustive


def _solve_exhaustive(q: KnapsackQuery) -> KnapsackResult:
    n = q.n
    w, p = _enum_subsets(q.weights, q.profits)
    if isinstance(w, np.ndarray):
        feasible = w <= q.capacity
        opt = int(p[feasible].max())
        ties = np.flatnonzero(feasible & (p == opt))
        witness = _lex_min_masks(ties)
    else:
        opt = max(prof for wgt, prof in zip(w, p) if wgt <= q.capacity)
        ties = [m for m in range(1 << n) if w[m] <= q.capacity and p[m] == opt]
        witness = _lex_min_masks_py(ties)
    return KnapsackResult(opt_value=opt, witness=witness, method=METHOD_EXHAUSTIVE)


def knapsack_max_exhaustive(q: KnapsackQuery) -> KnapsackResult:
    """Ground-truth oracle by full enumeration; hard contract n <= 25."""
    if q.n > 25:
        raise TooLarge(f"exhaustive oracle is contracted to n <= 25, got n = {q.n}")
    if not _int64_safe(q.weights, q.profits, q.capacity) and q.n > 20:
        raise ResourceBudgetExceeded("bigint exhaustive scan is limited to n <= 20")
    return _solve_exhaustive(q)


# ----------------------------------------------------------------- frontend


def _dp_fits(q: KnapsackQuery) -> bool:
    return (q.n + 1) * (q.capacity + 1) <= config.dp_cell_budget()


def knapsack_max(q: KnapsackQuery, method_hint: Optional[str] = None) -> KnapsackResult:
    """Exact optimum + lex-smallest witness; method auto-selected by budgets."""
    if method_hint is None:
        if _dp_fits(q):
            return _solve_dp(q)
        if q.n <= config.mitm_max_n():
            return _solve_mitm(q)
        if q.n <= config.exhaustive_max_n():
            return knapsack_max_exhaustive(q)
        raise ResourceBudgetExceeded(
            f"no method fits: n = {q.n}, capacity = {q.capacity}; "
            "shrink the instance or raise the budgets"
        )
    if method_hint == METHOD_DP:
        if not _dp_fits(q):
            raise ResourceBudgetExceeded(
                f"dp table needs {(q.n + 1) * (q.capacity + 1)} cells, "
                f"budget is {config.dp_cell_budget()}"
            )
        return _solve_dp(q)
    if method_hint == METHOD_MITM:
        if q.n > config.mitm_max_n():
            raise ResourceBudgetExceeded(f"meet-in-the-middle budget is n <= {config.mitm_max_n()}")
        return _solve_mitm(q)
    if method_hint == METHOD_EXHAUSTIVE:
        return knapsack_max_exhaustive(q)
    raise ValueError(f"unknown method hint {method_hint!r}")
