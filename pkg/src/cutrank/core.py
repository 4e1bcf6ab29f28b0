"""Exact foundations: knapsack polytopes with a fractional diagonal vertex.

An instance pairs a nonnegative integer weight vector c (not all zero) with a
rational eps in [0, 1/2).  It describes the polytope

    P(c, eps) = conv( {x in {0,1}^n : c.x <= ||c||_1 / 2}  u  {x*(eps)} ),

where x*(eps) = (1/2 + eps) * (1, ..., 1) is the diagonal vertex.  Since c is
integral, the 0/1 points of P(c, eps) are exactly those with
c.x <= floor(||c||_1 / 2); the instance carries both the rational capacity
(for fractional maxima) and that integer capacity.

A nonnegative integer profit vector ct ("c tilde") is *critical* when its
value at the diagonal vertex dominates every integral point:

    ct . x*(eps)  >=  max{ ct . x : x in {0,1}^n, c.x <= floor(||c||_1/2) }.

The comparison is non-strict.  Signed candidates are handled by clamping
negatives to zero first (`nonneg_reduce`), which never increases the 1-norm
and preserves criticality.

Everything is exact: rationals are `fractions.Fraction`, integers unbounded,
no floats anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import jsonio
from .errors import AllZeroWeights, NegativeProfit, ZeroVector

Rational = Fraction
WeightVector = tuple  # nonnegative ints, at least one positive
ProfitVector = tuple  # ints, negatives allowed on input


def as_weight_vector(entries: Sequence[int]) -> WeightVector:
    c = tuple(int(v) for v in entries)
    if any(v < 0 for v in c):
        raise ValueError("weights must be nonnegative")
    if not any(c):
        raise AllZeroWeights(f"need at least one positive weight, got {c!r}")
    return c


def as_profit_vector(entries: Sequence[int]) -> ProfitVector:
    return tuple(int(v) for v in entries)


def norm1(v: Sequence[int]) -> int:
    return sum(abs(int(x)) for x in v)


@dataclass(frozen=True)
class Instance:
    c: WeightVector
    eps: Rational

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def weight_norm(self) -> int:
        return sum(self.c)

    @property
    def capacity(self) -> Rational:
        """Exact rational capacity ||c||_1 / 2."""
        return Fraction(self.weight_norm, 2)

    @property
    def int_capacity(self) -> int:
        """Capacity governing the 0/1 points: floor(||c||_1 / 2)."""
        return self.weight_norm // 2

    @property
    def xstar_coord(self) -> Rational:
        return Fraction(1, 2) + self.eps

    def xstar(self) -> tuple:
        return (self.xstar_coord,) * self.n

    def to_json_dict(self) -> dict:
        return {"c": jsonio.int_list(self.c), "eps": jsonio.rat_str(self.eps)}


def instance_from_json(payload: dict) -> Instance:
    return make_instance(jsonio.parse_int_list(payload["c"]), jsonio.parse_rat(payload["eps"]))


@dataclass(frozen=True)
class CriticalityReport:
    ctilde: ProfitVector
    knapsack_opt: int
    ctilde_at_xstar: Rational
    is_critical: bool
    witness: tuple  # index subset with c(witness) <= int capacity, ct(witness) = opt

    def to_json_dict(self) -> dict:
        return {
            "ctilde": jsonio.int_list(self.ctilde),
            "knapsack_opt": jsonio.int_str(self.knapsack_opt),
            "value_at_xstar": jsonio.rat_str(self.ctilde_at_xstar),
            "critical": self.is_critical,
            "witness": list(self.witness),
        }


def make_instance(c: Sequence[int], eps) -> Instance:
    eps = Fraction(eps)
    if not (0 <= eps < Fraction(1, 2)):
        raise ValueError(f"eps must lie in [0, 1/2), got {eps}")
    return Instance(c=as_weight_vector(c), eps=eps)


def nonneg_reduce(ctilde: Sequence[int]) -> ProfitVector:
    """Clamp negatives to zero.  ||result||_1 <= ||ct||_1, criticality kept."""
    return tuple(max(int(v), 0) for v in as_profit_vector(ctilde))


def _require_nonneg(ctilde: Sequence[int]) -> ProfitVector:
    ct = as_profit_vector(ctilde)
    if any(v < 0 for v in ct):
        raise NegativeProfit(f"apply nonneg_reduce first: {ct!r}")
    return ct


def is_critical(inst: Instance, ctilde: Sequence[int]) -> CriticalityReport:
    """Exact criticality test via the knapsack oracle.

    The candidate must already be nonnegative; rejecting signed input keeps
    the clamping reduction an explicit, testable step.
    """
    from . import knapsack  # deferred: knapsack imports nothing from here

    ct = _require_nonneg(ctilde)
    if len(ct) != inst.n:
        raise ValueError("profit vector length differs from instance dimension")
    res = knapsack.knapsack_max(
        knapsack.KnapsackQuery(weights=inst.c, capacity=inst.int_capacity, profits=ct)
    )
    at_xstar = inst.xstar_coord * sum(ct)
    return CriticalityReport(
        ctilde=ct,
        knapsack_opt=res.opt_value,
        ctilde_at_xstar=at_xstar,
        is_critical=at_xstar >= res.opt_value,
        witness=res.witness,
    )


def epsilon_step(inst: Instance, ctilde: Sequence[int]) -> Rational:
    """Largest eps' whose diagonal point survives the single cut from ct.

    beta = max{ct.x : x in P(c, eps)} = max(knapsack opt, ct.x*(eps)); the cut
    ct.x <= floor(beta) pins the diagonal at eps' = floor(beta)/||ct||_1 - 1/2.
    When beta is integral the cut removes nothing and eps' == eps comes back.
    """
    ct = _require_nonneg(ctilde)
    total = sum(ct)
    if total == 0:
        raise ZeroVector("epsilon_step needs a nonzero profit vector")
    report = is_critical(inst, ct)
    beta = max(Fraction(report.knapsack_opt), report.ctilde_at_xstar)
    return Fraction(math.floor(beta), total) - Fraction(1, 2)
