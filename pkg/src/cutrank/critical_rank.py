"""Shortest critical vectors and grid-certified rank lower bounds.

L_c(eps) is the least l1-norm of a critical profit vector for the instance
(c, eps); restricting to nonnegative integer vectors is lossless (clamping
negatives to zero preserves criticality and never raises the norm).  The
quantity is monotonically non-increasing in eps, which is what lets one
evaluation certify a whole parameter cell:

    L(eps_hi) >= gamma / eps_lo   ==>   L(eps) >= gamma / eps  on [eps_lo, eps_hi].

`verify_gamma` stitches such cells over a decreasing grid and reports the
largest gamma certified on the full interval; `rank_lower_bound` then turns
gamma into the integer bound floor((gamma/2) * ln(delta0/delta1)), with the
logarithm evaluated in interval arithmetic so the floor is sound.

Two ways to lower-bound L at a grid point:

* exact_lmin — enumerate vectors by increasing norm (lexicographic inside a
  level, scalar multiples pruned via gcd) and test criticality with the
  exact knapsack oracle.  Exhausting the budget certifies L > budget.
* necessary_condition — every critical ctilde admits a scaling lambda with
  ||lambda*ctilde - c||_1 <= slack * eps * ||c||_1, so showing that *every*
  nonzero nonnegative ctilde with ||ctilde||_1 <= B misses that bound
  refutes all of them at once: L > B.  The double minimum over (lambda,
  ctilde) is attained at a breakpoint lambda = c_i/t with t <= B, and for
  fixed lambda = p/q the best ctilde is a greedy allocation in scaled
  integers (each full unit on coordinate i reduces the scaled residual by
  p while floor(c_i*q/p) units fit; one straddling unit reduces it by
  2*((c_i*q) mod p) - p).  Everything stays in exact integers end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import config, jsonio
from .core import Instance, is_critical, make_instance, norm1
from .errors import GammaTooSmall, UncertifiableGrid

METHOD_EXACT_LMIN = "exact_lmin"
METHOD_NECESSARY_CONDITION = "necessary_condition"

DEFAULT_SWEEP_SLACK = Fraction(32)


@dataclass(frozen=True)
class LMinResult:
    value: Optional[int]        # l1-norm of the witness, None when exceeded
    witness: Optional[tuple]
    search_budget: int
    exceeded: bool              # True certifies L > search_budget

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": None if self.witness is None else jsonio.int_list(self.witness),
            "search_budget": self.search_budget,
            "exceeded": self.exceeded,
        }


def _level_vectors(n: int, s: int):
    """Nonnegative integer n-vectors with l1-norm exactly s, lexicographic."""
    vec = [0] * n

    def rec(pos: int, rest: int):
        if pos == n - 1:
            vec[pos] = rest
            yield tuple(vec)
            vec[pos] = 0
            return
        for v in range(rest + 1):
            vec[pos] = v
            yield from rec(pos + 1, rest - v)
        vec[pos] = 0

    yield from rec(0, s)


def l_min(inst: Instance, budget: int) -> LMinResult:
    """Least l1-norm of a critical vector, or a certified L > budget.

    Increasing-norm enumeration with lexicographic order inside each level
    makes the witness deterministic; vectors with entry-gcd > 1 are skipped
    since criticality is invariant under positive scaling.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    n = inst.n
    for s in range(1, budget + 1):
        for ct in _level_vectors(n, s):
            if math.gcd(*ct) != 1:
                continue
            if is_critical(inst, ct).is_critical:
                return LMinResult(value=s, witness=ct, search_budget=budget, exceeded=False)
    return LMinResult(value=None, witness=None, search_budget=budget, exceeded=True)


def critical_upper(inst: Instance) -> tuple:
    """ctilde = floor(delta * c) with delta = n / (||c||_1 * eps).

    Always critical: any feasible x has ctilde.x <= delta*||c||_1/2 =
    n/(2 eps), while the fractional point collects at least
    (1/2 + eps)(n/eps - n) = n/(2 eps) + n(1/2 - eps) — the floor loses
    less than 1 per coordinate and eps < 1/2 absorbs the loss.  Also
    ||ctilde||_1 <= delta*||c||_1 = n/eps.  Re-verified by the exact oracle
    when the instance is small enough.
    """
    if inst.eps <= 0:
        raise ValueError("eps must be positive")
    c = inst.c
    n = inst.n
    delta = Fraction(n, 1) / (norm1(c) * inst.eps)
    ct = tuple((delta * v).numerator // (delta * v).denominator for v in c)
    if n <= 18 and (n + 1) * (norm1(c) // 2 + 1) <= config.dp_cell_budget():
        assert is_critical(inst, ct).is_critical, "floor construction must be critical"
    return ct


def _signed_critical(inst: Instance, ct: Sequence[int]) -> bool:
    """Criticality test admitting signed profits (negative entries never
    help a knapsack with nonnegative weights, so clamping is exact)."""
    clamped = tuple(max(int(v), 0) for v in ct)
    if not any(clamped):
        report_opt = 0
    else:
        report_opt = is_critical(inst, clamped).knapsack_opt
    at_xstar = inst.xstar_coord * sum(int(v) for v in ct)
    return at_xstar >= report_opt


# ---------------------------------------------------------------------------
# Refutation sweep (necessary-condition method)


def _scaled_min_residual_np(c_arr: np.ndarray, total_scaled: int, p: int, q: int, B: int) -> int:
    """min over ctilde >= 0, ||ctilde||_1 <= B of q * ||(p/q)*ctilde - c||_1.

    Scaled by q everything is integral: coordinate i admits u_i full
    allocation units each reducing the residual by p, plus one straddling
    unit reducing it by 2*rem_i - p.
    """
    C = c_arr * q
    u = C // p
    rem = C - u * p
    total_full = int(u.sum())
    if total_full >= B:
        return total_scaled - B * p
    red = total_full * p
    k = B - total_full
    partial = 2 * rem - p
    pos = partial[partial > 0]
    if pos.size:
        if pos.size > k:
            pos = np.partition(pos, pos.size - k)[pos.size - k:]
        red += int(pos.sum())
    return total_scaled - red


def _scaled_min_residual_py(c: Sequence[int], total_scaled: int, p: int, q: int, B: int) -> int:
    total_full = 0
    partials = []
    for v in c:
        cv = v * q
        u = cv // p
        total_full += u
        r = cv - u * p
        if 2 * r > p:
            partials.append(2 * r - p)
    if total_full >= B:
        return total_scaled - B * p
    red = total_full * p
    partials.sort(reverse=True)
    red += sum(partials[: B - total_full])
    return total_scaled - red


_INT64_HEADROOM = 1 << 62


def refute_budget(c: Sequence[int], eps, B: int, slack=DEFAULT_SWEEP_SLACK) -> bool:
    """True iff every nonzero ctilde >= 0 with ||ctilde||_1 <= B satisfies
    min over lambda of ||lambda*ctilde - c||_1 > slack * eps * ||c||_1.

    The double minimum is attained at some lambda = c_i/t with 1 <= t <= B
    (each fixed-ctilde objective is convex piecewise linear with exactly
    those breakpoints), so scanning that finite set is exact.
    """
    c = tuple(int(v) for v in c)
    if B < 1:
        raise ValueError("budget must be at least 1")
    total = sum(c)
    T = Fraction(slack) * Fraction(eps) * total
    if total <= T:
        return False  # ctilde near zero scaling already lands inside the slack
    lams = {Fraction(v, t) for v in c if v > 0 for t in range(1, B + 1)}
    c_arr = np.asarray(c, dtype=np.int64)
    use_np = max(c) * B < _INT64_HEADROOM and total * B < _INT64_HEADROOM
    tn, td = T.numerator, T.denominator
    for lam in lams:
        p, q = lam.numerator, lam.denominator
        ts = total * q
        if use_np:
            smin = _scaled_min_residual_np(c_arr, ts, p, q, B)
        else:
            smin = _scaled_min_residual_py(c, ts, p, q, B)
        # Fraction(smin, q) <= T ?
        if smin * td <= tn * q:
            return False
    return True


def max_refutable_budget(c: Sequence[int], eps, slack=DEFAULT_SWEEP_SLACK, b_cap: Optional[int] = None) -> int:
    """Largest B <= b_cap with refute_budget(c, eps, B); 0 when even B=1 fails.

    refute_budget is monotone (fewer vectors at smaller B), so doubling up
    to the first failure and bisecting is exact.
    """
    if b_cap is None:
        b_cap = config.sweep_max_b()
    if b_cap < 1 or not refute_budget(c, eps, 1, slack):
        return 0
    lo = 1
    hi = 1
    while hi < b_cap:
        nxt = min(2 * hi, b_cap)
        if refute_budget(c, eps, nxt, slack):
            lo = hi = nxt
        else:
            hi = nxt
            break
    if hi >= b_cap and lo == b_cap:
        return b_cap
    # invariant: lo refuted, hi failed
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if refute_budget(c, eps, mid, slack):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# Gamma certification over a grid


@dataclass(frozen=True)
class GammaPoint:
    eps: Fraction
    l_bound: int                 # certified L(eps) >= l_bound (0 = no information)
    found_value: Optional[int]   # exact_lmin: the exact L when a witness appeared
    exceeded: bool               # exact_lmin: budget exhausted (L > budget)
    max_refuted: Optional[int]   # necessary_condition: largest refuted budget

    def to_json_dict(self) -> dict:
        return {
            "eps": jsonio.rat_str(self.eps),
            "l_bound": self.l_bound,
            "found_value": self.found_value,
            "exceeded": self.exceeded,
            "max_refuted": self.max_refuted,
        }


@dataclass(frozen=True)
class GammaCertificate:
    c: tuple
    method: str
    delta0: Fraction
    delta1: Fraction
    eps_grid: tuple              # decreasing, eps_grid[0] = delta0, eps_grid[-1] = delta1
    points: tuple                # GammaPoint per grid value
    cell_gammas: tuple           # eps_lo * l_bound(eps_hi) per consecutive pair
    gamma: Fraction
    lmin_budget: Optional[int]
    slack: Optional[Fraction]
    b_cap: Optional[int]
    preconditions_hold: Optional[bool]  # necessary_condition only

    def to_json_dict(self) -> dict:
        return {
            "kind": "gamma_certificate",
            "c": jsonio.int_list(self.c),
            "method": self.method,
            "delta0": jsonio.rat_str(self.delta0),
            "delta1": jsonio.rat_str(self.delta1),
            "eps_grid": [jsonio.rat_str(e) for e in self.eps_grid],
            "points": [p.to_json_dict() for p in self.points],
            "cell_gammas": [jsonio.rat_str(g) for g in self.cell_gammas],
            "gamma": jsonio.rat_str(self.gamma),
            "lmin_budget": self.lmin_budget,
            "slack": None if self.slack is None else jsonio.rat_str(self.slack),
            "b_cap": self.b_cap,
            "preconditions_hold": self.preconditions_hold,
        }


def _point_bound(c, eps, method, lmin_budget, slack, b_cap) -> GammaPoint:
    if method == METHOD_EXACT_LMIN:
        res = l_min(make_instance(c, eps), lmin_budget)
        lb = lmin_budget + 1 if res.exceeded else res.value
        return GammaPoint(eps=eps, l_bound=lb, found_value=res.value,
                          exceeded=res.exceeded, max_refuted=None)
    best = max_refutable_budget(c, eps, slack=slack, b_cap=b_cap)
    # refuting nothing yields no method-derived bound (l_bound 0, not the
    # trivial L >= 1): certification must come from the sweep itself
    lb = best + 1 if best >= 1 else 0
    return GammaPoint(eps=eps, l_bound=lb, found_value=None,
                      exceeded=False, max_refuted=best)


def verify_gamma(
    c: Sequence[int],
    delta0,
    delta1,
    grid: Sequence,
    method: str = METHOD_EXACT_LMIN,
    *,
    lmin_budget: int = 8,
    slack=DEFAULT_SWEEP_SLACK,
    b_cap: Optional[int] = None,
    bases=None,
) -> GammaCertificate:
    """Largest gamma with L_c(eps) >= gamma/eps certified on [delta1, delta0].

    The grid must run decreasing from delta0 to delta1; each consecutive
    pair (eps_hi, eps_lo) is certified by the evaluation at eps_hi via
    monotonicity, contributing the cell value eps_lo * l_bound(eps_hi).
    Raises UncertifiableGrid when some cell contributes gamma <= 0.
    """
    c = tuple(int(v) for v in c)
    delta0 = Fraction(delta0)
    delta1 = Fraction(delta1)
    if not (0 < delta1 <= delta0):
        raise ValueError("need 0 < delta1 <= delta0")
    eps_grid = tuple(Fraction(e) for e in grid)
    if not eps_grid or eps_grid[0] != delta0 or eps_grid[-1] != delta1:
        raise ValueError("grid must start at delta0 and end at delta1")
    if any(eps_grid[j] <= eps_grid[j + 1] for j in range(len(eps_grid) - 1)):
        raise ValueError("grid must be strictly decreasing")
    if method not in (METHOD_EXACT_LMIN, METHOD_NECESSARY_CONDITION):
        raise ValueError(f"unknown method {method!r}")
    if b_cap is None:
        b_cap = config.sweep_max_b()
    slack = Fraction(slack)

    points = tuple(_point_bound(c, e, method, lmin_budget, slack, b_cap) for e in eps_grid)

    if len(eps_grid) == 1:
        cells = (eps_grid[0] * points[0].l_bound,)
    else:
        cells = tuple(
            eps_grid[j + 1] * points[j].l_bound for j in range(len(eps_grid) - 1)
        )
    gamma = min(cells)
    if gamma <= 0:
        raise UncertifiableGrid(
            f"a cell certified nothing (gamma = {gamma}); refine the grid, raise "
            "budgets, or loosen the slack"
        )
    pre = None
    if method == METHOD_NECESSARY_CONDITION:
        from .hardness import _lemma_preconditions

        pre = _lemma_preconditions(c, bases)
    return GammaCertificate(
        c=c,
        method=method,
        delta0=delta0,
        delta1=delta1,
        eps_grid=eps_grid,
        points=points,
        cell_gammas=cells,
        gamma=gamma,
        lmin_budget=lmin_budget if method == METHOD_EXACT_LMIN else None,
        slack=slack if method == METHOD_NECESSARY_CONDITION else None,
        b_cap=b_cap if method == METHOD_NECESSARY_CONDITION else None,
        preconditions_hold=pre,
    )


def certificate_from_json(d: dict) -> GammaCertificate:
    pts = tuple(
        GammaPoint(
            eps=jsonio.parse_rat(p["eps"]),
            l_bound=jsonio.parse_int(p["l_bound"]),
            found_value=None if p["found_value"] is None else jsonio.parse_int(p["found_value"]),
            exceeded=bool(p["exceeded"]),
            max_refuted=None if p["max_refuted"] is None else jsonio.parse_int(p["max_refuted"]),
        )
        for p in d["points"]
    )
    return GammaCertificate(
        c=jsonio.parse_int_list(d["c"]),
        method=d["method"],
        delta0=jsonio.parse_rat(d["delta0"]),
        delta1=jsonio.parse_rat(d["delta1"]),
        eps_grid=tuple(jsonio.parse_rat(e) for e in d["eps_grid"]),
        points=pts,
        cell_gammas=tuple(jsonio.parse_rat(g) for g in d["cell_gammas"]),
        gamma=jsonio.parse_rat(d["gamma"]),
        lmin_budget=None if d.get("lmin_budget") is None else jsonio.parse_int(d["lmin_budget"]),
        slack=None if d.get("slack") is None else jsonio.parse_rat(d["slack"]),
        b_cap=None if d.get("b_cap") is None else jsonio.parse_int(d["b_cap"]),
        preconditions_hold=d.get("preconditions_hold"),
    )


def replay_certificate(cert: GammaCertificate) -> tuple:
    """Recompute every point bound and the stitching; (ok, recomputed).

    ok requires each recomputed l_bound to be at least the stored one and
    the stored gamma to be at most the recomputed gamma — a certificate
    claiming less than the computation supports is still valid.
    """
    redo = verify_gamma(
        cert.c,
        cert.delta0,
        cert.delta1,
        cert.eps_grid,
        cert.method,
        lmin_budget=cert.lmin_budget if cert.lmin_budget is not None else 8,
        slack=cert.slack if cert.slack is not None else DEFAULT_SWEEP_SLACK,
        b_cap=cert.b_cap,
    )
    ok = all(
        rp.l_bound >= sp.l_bound for rp, sp in zip(redo.points, cert.points)
    ) and cert.gamma <= redo.gamma
    return ok, redo


# ---------------------------------------------------------------------------
# Rank lower bound with directed rounding


def _atanh_bounds(u: Fraction, terms: int) -> tuple:
    """(lo, hi) enclosing atanh(u) for 0 <= u < 1 by the odd power series;
    remainder after N terms is at most u^(2N+1) / ((2N+1)(1-u^2))."""
    acc = Fraction(0)
    upow = u
    usq = u * u
    for i in range(terms):
        acc += upow / (2 * i + 1)
        upow *= usq
    rem = upow / ((2 * terms + 1) * (1 - usq))
    return acc, acc + rem


_LN_TERMS = 24


def ln_bounds(r: Fraction) -> tuple:
    """Rational (lo, hi) with lo <= ln(r) <= hi, for r >= 1."""
    r = Fraction(r)
    if r < 1:
        raise ValueError("need r >= 1")
    if r == 1:
        return Fraction(0), Fraction(0)
    k = 0
    s = r
    while s >= 2:
        s /= 2
        k += 1
    # ln r = k*ln 2 + 2*atanh((s-1)/(s+1)), s in [1, 2)
    ln2_lo, ln2_hi = _atanh_bounds(Fraction(1, 3), _LN_TERMS)
    ln2_lo, ln2_hi = 2 * ln2_lo, 2 * ln2_hi
    at_lo, at_hi = _atanh_bounds((s - 1) / (s + 1), _LN_TERMS)
    return k * ln2_lo + 2 * at_lo, k * ln2_hi + 2 * at_hi


@dataclass(frozen=True)
class RankBound:
    gamma: Fraction
    delta0: Fraction
    delta1: Fraction
    bound_lo: Fraction           # certified lower end of (gamma/2) ln(delta0/delta1)
    bound_hi: Fraction
    floor_bound: int             # sound integer rank lower bound

    def to_json_dict(self) -> dict:
        return {
            "gamma": jsonio.rat_str(self.gamma),
            "delta0": jsonio.rat_str(self.delta0),
            "delta1": jsonio.rat_str(self.delta1),
            "bound_lo": jsonio.rat_str(self.bound_lo),
            "bound_hi": jsonio.rat_str(self.bound_hi),
            "bound_approx": float(self.bound_lo),
            "floor_bound": self.floor_bound,
        }


def rank_lower_bound(gamma, delta0, delta1) -> RankBound:
    """(gamma/2) * ln(delta0/delta1), rounded downward before flooring."""
    gamma = Fraction(gamma)
    delta0 = Fraction(delta0)
    delta1 = Fraction(delta1)
    if gamma < 2:
        raise GammaTooSmall(f"gamma = {gamma} < 2")
    if not (delta0 > delta1 > 0):
        raise ValueError("need delta0 > delta1 > 0")
    lo, hi = ln_bounds(delta0 / delta1)
    blo = gamma / 2 * lo
    bhi = gamma / 2 * hi
    return RankBound(
        gamma=gamma,
        delta0=delta0,
        delta1=delta1,
        bound_lo=blo,
        bound_hi=bhi,
        floor_bound=blo.numerator // blo.denominator,
    )
