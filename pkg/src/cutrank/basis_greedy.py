"""Additive bases and the greedy half-weight knapsack solution it certifies.

An *additive basis* for {0, ..., M} is a multiset of nonnegative integers
such that every value in the interval is an exact subset sum.  Reachability
is decided by a bitset subset-sum sweep (`reach |= reach << v`).

`greedy_certificate` builds, for weights c (strictly positive, even total)
and nonnegative profits ct, a solution J with c(J) = ||c||_1 / 2 *exactly*:
sort by profit/weight ratio, place a threshold 1/lambda at the half-weight
boundary, take the best prefix avoiding one basis block B, and close the
remaining gap with an exact subset of B.  With relative profits
w_i = ct_i - c_i/lambda the construction certifies

    ct(J)  >=  (1/2)*||ct||_1 + (1/16)*||w||_1

whenever the smallness preconditions hold (max coefficient and every basis
block weigh at most ||c||_1/100); `check_claims` evaluates the two
inequalities behind that bound, and the basis mass pigeonhole, exactly.

Threshold placement: when the half-weight boundary falls between two
distinct ratio values, 1/lambda is their midpoint and no ratio equals it;
when a single ratio class straddles the boundary, no separating value
exists, so 1/lambda is that class's ratio and the class carries w = 0.
Zero-profit items simply have ratio 0 and sort last.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import jsonio
from .core import as_profit_vector
from .errors import GapNotFillable, NegativeProfit, NoExactFill, OddTotalWeight

THRESHOLD_MIDPOINT = "midpoint"
THRESHOLD_CLASS = "class"

DEFAULT_DELTA = Fraction(1, 100)


def _reach_bitset(values) -> int:
    r = 1
    for v in values:
        r |= r << v
    return r


def covered_interval_max(values) -> int:
    """Largest M with all of {0, ..., M} reachable as subset sums."""
    r = _reach_bitset(values)
    inv = ~r
    return (inv & -inv).bit_length() - 2  # lowest missing sum, minus one


def is_additive_basis(values: Sequence[int], interval_max: int) -> bool:
    vals = [int(v) for v in values]
    if any(v < 0 for v in vals):
        raise ValueError("basis values must be nonnegative")
    if interval_max < 0:
        return True
    if interval_max > sum(vals):
        return False
    mask = (1 << (interval_max + 1)) - 1
    return (_reach_bitset(vals) & mask) == mask


@dataclass(frozen=True)
class AdditiveBasis:
    indices: tuple
    values: tuple
    covered_interval_max: int


def make_basis(indices: Sequence[int], values: Sequence[int]) -> AdditiveBasis:
    idx = tuple(int(i) for i in indices)
    vals = tuple(int(v) for v in values)
    if len(idx) != len(vals):
        raise ValueError("indices and values must align")
    return AdditiveBasis(indices=idx, values=vals, covered_interval_max=covered_interval_max(vals))


def basis_from_weights(c: Sequence[int], indices: Sequence[int]) -> AdditiveBasis:
    return make_basis(indices, [c[i] for i in indices])


def powers_basis(m: int) -> tuple:
    """(2^0, ..., 2^(floor(m/8)+1)): floor(m/8)+2 entries, covering {0..2^(floor(m/8)+2)-1}."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return tuple(1 << i for i in range(m // 8 + 2))


def trimmed_basis(total: int) -> tuple:
    """Minimal-sum basis for {0, ..., total}: powers of two plus one remainder.

    Sum is exactly `total`, so the block stays light even when the interval
    is wide — the property the big assembled instances need.
    """
    if total < 1:
        raise ValueError("total must be positive")
    vals = []
    acc = 0
    p = 1
    while acc + p <= total:
        vals.append(p)
        acc += p
        p <<= 1
    if total > acc:
        vals.append(total - acc)  # remainder <= acc + 1 keeps coverage
    return tuple(vals)


def basis_fill(basis: AdditiveBasis, target: int) -> tuple:
    """Index subset of the basis summing to target exactly.

    Deterministic skip-first backtrack over prefix reachability; on a
    power-of-two basis this reproduces the binary digits of target.
    """
    target = int(target)
    if target < 0:
        raise ValueError("target must be nonnegative")
    if target == 0:
        return ()
    prefix = [1]
    for v in basis.values:
        prefix.append(prefix[-1] | (prefix[-1] << v))
    if not (prefix[-1] >> target) & 1:
        raise NoExactFill(f"{target} is not a subset sum of {basis.values!r}")
    chosen = []
    rest = target
    for j in range(len(basis.values) - 1, -1, -1):
        if (prefix[j] >> rest) & 1:
            continue  # reachable without item j: skip it
        chosen.append(basis.indices[j])
        rest -= basis.values[j]
        if rest == 0:
            break
    return tuple(sorted(chosen))


@dataclass(frozen=True)
class GreedyCertificate:
    sorted_order: tuple          # permutation of [n], ratio-descending
    lam: Optional[Fraction]      # None encodes threshold 0 (lambda infinite)
    threshold: Fraction          # 1/lambda
    threshold_mode: str          # midpoint between ratio classes, or on one
    q: int                       # count of indices with ratio > threshold
    k: int                       # maximal sorted prefix with c(prefix \ B) <= half
    chosen_basis: int            # 0, 1, or 2
    bases: tuple                 # the three disjoint index blocks
    J: tuple                     # the solution, c(J) = ||c||_1 / 2
    w: tuple                     # relative profits ct_i - c_i/lambda, input order
    bound_value: Fraction
    achieved_value: int

    def to_json_dict(self) -> dict:
        return {
            "lambda": None if self.lam is None else jsonio.rat_str(self.lam),
            "threshold": jsonio.rat_str(self.threshold),
            "threshold_mode": self.threshold_mode,
            "q": self.q,
            "k": self.k,
            "basis": self.chosen_basis,
            "bases": [list(b) for b in self.bases],
            "sorted_order": list(self.sorted_order),
            "J": list(self.J),
            "w": [jsonio.rat_str(x) for x in self.w],
            "achieved": jsonio.int_str(self.achieved_value),
            "bound": jsonio.rat_str(self.bound_value),
        }


@dataclass(frozen=True)
class ClaimReport:
    central_window_mass: Fraction
    claim1_bound: Fraction       # 9 * delta * ||w||_1
    claim1_holds: bool
    claim2_lhs: Fraction         # w(J) - w([n] \ J)
    claim2_bound: Fraction       # ||w||_1 / 8
    claim2_holds: bool
    basis_mass: Fraction
    basis_mass_bound: Fraction   # ||w||_1 / 3
    basis_mass_holds: bool
    bound_holds: bool            # achieved >= (1/2)||ct||_1 + (1/16)||w||_1
    preconditions_hold: bool

    def to_json_dict(self) -> dict:
        return {
            "central_window_mass": jsonio.rat_str(self.central_window_mass),
            "claim1_bound": jsonio.rat_str(self.claim1_bound),
            "claim1_holds": self.claim1_holds,
            "claim2_lhs": jsonio.rat_str(self.claim2_lhs),
            "claim2_bound": jsonio.rat_str(self.claim2_bound),
            "claim2_holds": self.claim2_holds,
            "basis_mass": jsonio.rat_str(self.basis_mass),
            "basis_mass_bound": jsonio.rat_str(self.basis_mass_bound),
            "basis_mass_holds": self.basis_mass_holds,
            "bound_holds": self.bound_holds,
            "preconditions_hold": self.preconditions_hold,
        }


def _validate_bases(n: int, bases) -> tuple:
    if len(bases) != 3:
        raise ValueError("exactly three basis blocks required")
    cleaned = tuple(tuple(int(i) for i in b) for b in bases)
    seen = set()
    for block in cleaned:
        for i in block:
            if not 0 <= i < n:
                raise ValueError(f"basis index {i} out of range")
            if i in seen:
                raise ValueError(f"basis blocks must be disjoint, {i} repeated")
            seen.add(i)
    return cleaned


def greedy_certificate(c: Sequence[int], ctilde: Sequence[int], bases) -> GreedyCertificate:
    """Construct the half-weight solution J and its certified value bound.

    Inputs may violate the smallness preconditions; the certificate is still
    well formed, only the bound guarantee becomes conditional (and
    `check_claims` will report which inequalities failed).
    """
    c = tuple(int(v) for v in c)
    if any(v <= 0 for v in c):
        raise ValueError("weights must be strictly positive here; strip zero-cost items first")
    ct = as_profit_vector(ctilde)
    if any(v < 0 for v in ct):
        raise NegativeProfit("profits must be nonnegative")
    if len(c) != len(ct):
        raise ValueError("c and ctilde must have equal length")
    n = len(c)
    bases = _validate_bases(n, bases)
    total = sum(c)
    if total % 2:
        raise OddTotalWeight(f"||c||_1 = {total} is odd; no subset can weigh exactly half")
    half = total // 2

    ratios = [Fraction(ct[i], c[i]) for i in range(n)]
    order = tuple(sorted(range(n), key=lambda i: (-ratios[i], i)))

    # half-weight boundary in the sorted order (always inside: total = 2*half)
    cum = 0
    jstar = 0
    for pos, i in enumerate(order):
        if cum + c[i] > half:
            break
        cum += c[i]
        jstar = pos + 1
    boundary = ratios[order[jstar]]
    if jstar > 0 and ratios[order[jstar - 1]] != boundary:
        threshold = (ratios[order[jstar - 1]] + boundary) / 2
        mode = THRESHOLD_MIDPOINT
    else:
        # the boundary ratio class straddles the half-weight point
        threshold = boundary
        mode = THRESHOLD_CLASS
    lam = None if threshold == 0 else 1 / threshold

    w = tuple(ct[i] - threshold * c[i] for i in range(n))
    q = sum(1 for i in range(n) if ratios[i] > threshold)
    wnorm = sum(abs(x) for x in w)

    masses = [sum(abs(w[i]) for i in block) for block in bases]
    chosen = min(range(3), key=lambda l: (masses[l], l))
    in_b = frozenset(bases[chosen])

    acc = 0
    k = 0
    for pos, i in enumerate(order):
        if i in in_b:
            k = pos + 1
            continue
        if acc + c[i] > half:
            break
        acc += c[i]
        k = pos + 1

    gap = half - acc
    basis = basis_from_weights(c, bases[chosen])
    if gap > basis.covered_interval_max:
        raise GapNotFillable(
            f"gap {gap} exceeds covered interval {basis.covered_interval_max} "
            "(max coefficient too large for this basis)"
        )
    fill = basis_fill(basis, gap)

    J = tuple(sorted([i for i in order[:k] if i not in in_b] + list(fill)))
    assert sum(c[i] for i in J) == half

    achieved = sum(ct[i] for i in J)
    bound = Fraction(sum(ct), 2) + Fraction(1, 16) * wnorm
    return GreedyCertificate(
        sorted_order=order,
        lam=lam,
        threshold=threshold,
        threshold_mode=mode,
        q=q,
        k=k,
        chosen_basis=chosen,
        bases=bases,
        J=J,
        w=w,
        bound_value=bound,
        achieved_value=achieved,
    )


def check_claims(cert: GreedyCertificate, c: Sequence[int], delta: Fraction = DEFAULT_DELTA) -> ClaimReport:
    """Exact evaluation of the two inequalities behind the greedy bound.

    All fields are computed unconditionally; the *_holds flags say which
    inequalities came out true, and preconditions_hold says whether they
    were guaranteed to.
    """
    c = tuple(int(v) for v in c)
    delta = Fraction(delta)
    n = len(c)
    total = sum(c)
    w = cert.w
    wnorm = sum(abs(x) for x in w)

    lo = (Fraction(1, 2) - delta) * total
    hi = (Fraction(1, 2) + delta) * total
    window_mass = Fraction(0)
    cum = 0
    for i in cert.sorted_order:
        cum += c[i]
        if lo <= cum <= hi:
            window_mass += abs(w[i])

    in_j = frozenset(cert.J)
    w_in = sum((w[i] for i in in_j), Fraction(0))
    w_out = sum((w[i] for i in range(n) if i not in in_j), Fraction(0))

    basis_mass = sum((abs(w[i]) for i in cert.bases[cert.chosen_basis]), Fraction(0))

    claim1_bound = 9 * delta * wnorm
    claim2_bound = Fraction(wnorm, 8)
    pre = max(c) <= delta * total and all(
        sum(c[i] for i in block) <= delta * total for block in cert.bases
    )
    return ClaimReport(
        central_window_mass=window_mass,
        claim1_bound=claim1_bound,
        claim1_holds=window_mass <= claim1_bound,
        claim2_lhs=w_in - w_out,
        claim2_bound=claim2_bound,
        claim2_holds=w_in - w_out >= claim2_bound,
        basis_mass=basis_mass,
        basis_mass_bound=Fraction(wnorm, 3),
        basis_mass_holds=basis_mass <= Fraction(wnorm, 3),
        bound_holds=cert.achieved_value >= cert.bound_value,
        preconditions_hold=pre,
    )
