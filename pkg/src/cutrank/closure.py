"""Exact low-dimensional polytope sandbox for rounding-cut dynamics.

Everything here is rational arithmetic on H-polytopes inside the unit cube
(the cube bounds are always part of the inequality list, so every polytope
is bounded and vertex enumeration over n-subsets of inequalities is exact).
Dimensions are tiny by design — the point is cross-validation, not scale.

For a normal vector c, the rounding cut is  c x <= floor(max{c y : y in P}).
`candidate_closure` intersects the cuts of every nonzero primitive normal
with ||c||_inf <= K together with the polytope's own inequalities.  That is
a truncation: the result is a SUPERSET of the true closure (the full
intersection runs over all integer normals), so any point excluded by an
iterated candidate closure is excluded by the true closure sequence too —
the sound direction for lower-bound experiments.  Non-primitive normals are
skipped because their cuts are implied by the primitive ones (2c x <=
floor(2b) is weaker than 2 * (c x <= floor(b)) intersected with the grid of
the cube).

`diagonal_trace` follows max{eps : (1/2 + eps) * ones in P_i} across rounds;
membership of the diagonal point is a finite set of linear conditions in
eps, one per inequality, so each trace value is a closed-form minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from . import config, jsonio
from .core import Instance
from .errors import BudgetExceeded, EmptyPolytope


@dataclass(frozen=True)
class HPolytope:
    n: int
    ineqs: tuple  # ((a_1..a_n), b) rows, integer normals, Fraction rhs

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "ineqs": [
                {"a": jsonio.int_list(a), "b": jsonio.rat_str(b)} for a, b in self.ineqs
            ],
        }


def _cube_rows(n: int) -> list:
    rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((tuple(e), Fraction(1)))
        e[i] = -1
        rows.append((tuple(e), Fraction(0)))
    return rows


def make_polytope(n: int, ineqs: Sequence = ()) -> HPolytope:
    """Normalize rows, add cube bounds, and keep one rhs per normal (the
    tightest).  Rows are kept in first-seen order for stable output."""
    if n < 1:
        raise ValueError("dimension must be positive")
    best = {}
    order = []
    for a, b in list(ineqs) + _cube_rows(n):
        a = tuple(int(v) for v in a)
        if len(a) != n:
            raise ValueError("normal vector has wrong dimension")
        b = Fraction(b)
        if a not in best:
            best[a] = b
            order.append(a)
        elif b < best[a]:
            best[a] = b
    return HPolytope(n=n, ineqs=tuple((a, best[a]) for a in order))


def poly_from_json(d: dict) -> HPolytope:
    rows = [(jsonio.parse_int_list(r["a"]), jsonio.parse_rat(r["b"])) for r in d["ineqs"]]
    return make_polytope(jsonio.parse_int(d["n"]), rows)


def _solve_square(rows: Sequence, rhs: Sequence) -> Optional[tuple]:
    """Solve an n x n rational system by Gaussian elimination; None if singular."""
    n = len(rows)
    m = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col]
        m[col] = [v / inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return tuple(m[r][n] for r in range(n))


def contains(poly: HPolytope, x: Sequence) -> bool:
    x = [Fraction(v) for v in x]
    return all(sum(ai * xi for ai, xi in zip(a, x)) <= b for a, b in poly.ineqs)


def vertices(poly: HPolytope) -> tuple:
    """All vertices, as n-subsets of tight inequalities (exact, deduplicated)."""
    rows = poly.ineqs
    count = math.comb(len(rows), poly.n)
    if count > config.vertex_budget():
        raise BudgetExceeded(
            f"{count} inequality subsets exceed the vertex enumeration budget"
        )
    seen = set()
    out = []
    for subset in combinations(rows, poly.n):
        x = _solve_square([a for a, _ in subset], [b for _, b in subset])
        if x is None or x in seen:
            continue
        if contains(poly, x):
            seen.add(x)
            out.append(x)
    return tuple(out)


def lp_max(poly: HPolytope, objective: Sequence[int]) -> Fraction:
    obj = tuple(int(v) for v in objective)
    verts = vertices(poly)
    if not verts:
        raise EmptyPolytope("no feasible vertex")
    return max(sum(o * x for o, x in zip(obj, v)) for v in verts)


def gc_cut(poly: HPolytope, c: Sequence[int]) -> tuple:
    """The rounding cut (c, floor(lp_max)); c = 0 gives the vacuous 0 <= 0."""
    c = tuple(int(v) for v in c)
    if not any(c):
        return c, Fraction(0)
    return c, Fraction(math.floor(lp_max(poly, c)))


def candidate_closure(poly: HPolytope, K: int) -> HPolytope:
    """Intersect the cuts of all primitive normals with ||c||_inf <= K.

    Upper-bounding relaxation of the true closure (truncated normal set);
    the polytope's own rows are kept, so the result also stays inside the
    input and traces are monotone.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    n = poly.n
    work = n * (2 * K + 1) ** n
    if work > config.closure_budget():
        raise BudgetExceeded(f"{work} normal evaluations exceed the closure budget")
    verts = vertices(poly)
    if not verts:
        raise EmptyPolytope("no feasible vertex")
    cuts = []
    for c in product(range(-K, K + 1), repeat=n):
        if not any(c) or math.gcd(*c) != 1:
            continue
        beta = max(sum(ci * xi for ci, xi in zip(c, v)) for v in verts)
        cuts.append((c, Fraction(math.floor(beta))))
    return make_polytope(n, list(poly.ineqs) + cuts)


def reduce_redundant(poly: HPolytope) -> HPolytope:
    """Drop rows implied by the others (exact LP test per row)."""
    cube = set(_cube_rows(poly.n))
    rows = list(poly.ineqs)
    keep = list(rows)
    for row in rows:
        if (row[0], row[1]) in cube:
            continue
        rest = [r for r in keep if r != row]
        trial = HPolytope(n=poly.n, ineqs=tuple(rest))
        try:
            if lp_max(trial, row[0]) <= row[1]:
                keep = rest
        except EmptyPolytope:
            pass
    return HPolytope(n=poly.n, ineqs=tuple(keep))


def diag_max(poly: HPolytope) -> Optional[Fraction]:
    """max{eps : (1/2 + eps) * ones in poly}, or None when no diagonal point fits.

    Row (a, b) constrains s*(1/2 + eps) <= b with s = sum(a): an upper bound
    on eps when s > 0, a lower bound when s < 0, a fixed test when s = 0.
    """
    lo, hi = None, None
    for a, b in poly.ineqs:
        s = sum(a)
        if s == 0:
            if b < 0:
                return None
            continue
        bound = Fraction(b, s) - Fraction(1, 2)
        if s > 0:
            hi = bound if hi is None else min(hi, bound)
        else:
            lo = bound if lo is None else max(lo, bound)
    if hi is None:
        return None  # unbounded above cannot happen with cube rows present
    if lo is not None and lo > hi:
        return None
    return hi


def diagonal_trace(poly0: HPolytope, K: int, rounds: int, reduce: bool = True) -> tuple:
    """(eps_bar_0, ..., eps_bar_rounds) across iterated candidate closures."""
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    out = [diag_max(poly0)]
    poly = poly0
    for _ in range(rounds):
        poly = candidate_closure(poly, K)
        if reduce:
            poly = reduce_redundant(poly)
        out.append(diag_max(poly))
    return tuple(out)


def trace_csv(trace: Sequence) -> str:
    lines = ["round,eps_bar"]
    for i, e in enumerate(trace):
        lines.append(f"{i},{'' if e is None else jsonio.rat_str(e)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ZeroOneHull:
    vertices: tuple

    def max_of(self, d: Sequence[int]) -> Fraction:
        if not self.vertices:
            raise EmptyPolytope("hull has no integral points")
        return Fraction(max(sum(di * vi for di, vi in zip(d, v)) for v in self.vertices))


def zero_one_hull(poly: HPolytope) -> ZeroOneHull:
    pts = tuple(
        p for p in product((0, 1), repeat=poly.n) if contains(poly, p)
    )
    return ZeroOneHull(vertices=pts)


def is_saturated(poly: HPolytope, hull: ZeroOneHull, d: Sequence[int]) -> bool:
    """True iff max over poly equals max over its 0/1 hull in direction d."""
    d = tuple(int(v) for v in d)
    if not any(d):
        return True
    return lp_max(poly, d) == hull.max_of(d)


# ---------------------------------------------------------------------------
# From an instance to its H-description (facet enumeration at n <= 4)


def _hyperplane(points: Sequence, n: int) -> Optional[tuple]:
    """(a, b) with a.p = b for all points, integer primitive a; None when the
    points do not span a unique hyperplane."""
    # nullspace of the homogeneous system [p_i | 1] . (a, -b) = 0
    m = [[Fraction(v) for v in p] + [Fraction(1)] for p in points]
    cols = n + 1
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col]
        m[r] = [v / inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [v - f * w for v, w in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    if r != n:  # nullspace dimension != 1: no unique hyperplane
        return None
    free = next(c for c in range(cols) if c not in pivots)
    z = [Fraction(0)] * cols
    z[free] = Fraction(1)
    for row, col in zip(m, pivots):
        z[col] = -row[free]
    denom_lcm = 1
    for v in z:
        denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in z]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    a, negb = ints[:n], ints[n]
    return tuple(a), -negb


def from_points(points: Sequence, n: int) -> HPolytope:
    """H-description of a full-dimensional convex hull of rational points."""
    if n > 4:
        raise ValueError("facet enumeration is limited to n <= 4")
    pts = [tuple(Fraction(v) for v in p) for p in points]
    if len(pts) < n + 1:
        raise ValueError("need at least n+1 points for a full-dimensional hull")
    rows = []
    for subset in combinations(pts, n):
        hp = _hyperplane(subset, n)
        if hp is None:
            continue
        a, b = hp
        vals = [sum(ai * pi for ai, pi in zip(a, p)) for p in pts]
        if all(v == b for v in vals):
            raise ValueError("points lie in a common hyperplane (not full-dimensional)")
        if all(v <= b for v in vals):
            rows.append((a, Fraction(b)))
        elif all(v >= b for v in vals):
            rows.append((tuple(-x for x in a), Fraction(-b)))
    if not rows:
        raise ValueError("points do not span a full-dimensional polytope")
    return make_polytope(n, rows)


def from_instance(inst: Instance) -> HPolytope:
    """H-description of conv({x in {0,1}^n : cx <= ||c||_1/2} union {x*})."""
    n = inst.n
    if n > 4:
        raise ValueError("sandbox polytopes are limited to n <= 4")
    cap = inst.capacity
    pts = [
        p for p in product((0, 1), repeat=n)
        if sum(ci * pi for ci, pi in zip(inst.c, p)) <= cap
    ]
    pts.append(inst.xstar())
    return from_points(pts, n)
