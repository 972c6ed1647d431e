"""Piecewise-affine expanding multi-valued systems on the interval / circle.

Branches are exact affine maps with rational slope and offset on rational
closed subdomains of [0, 1]; wrapping branches act modulo 1.  Periodic orbits
are enumerated exactly by solving the composed affine fixed-point equation
per itinerary, and the expansion property is certified by exact case
analysis on branch pairs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

ORBIT_PERIOD_LIMIT = 24


class NotExpandingError(Exception):
    """The branch family fails the uniform expansion case analysis."""

    def __init__(self, pair: tuple[int, int], reason: str):
        super().__init__(f"branches {pair} are not uniformly separated: {reason}")
        self.pair = pair


@dataclass(frozen=True)
class Branch:
    """One affine branch x -> slope*x + offset on [lo, hi] (mod 1 if wraps)."""

    slope: Fraction
    offset: Fraction
    lo: Fraction
    hi: Fraction
    wraps: bool = False

    def __post_init__(self):
        if abs(self.slope) <= 1:
            raise ValueError("branch slope must exceed 1 in absolute value")
        if not (0 <= self.lo <= self.hi <= 1):
            raise ValueError("branch domain must be a subinterval of [0, 1]")
        if not self.wraps:
            for x in (self.lo, self.hi):
                y = self.slope * x + self.offset
                if not (0 <= y <= 1):
                    raise ValueError("non-wrapping branch must map its domain into [0, 1]")

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def apply(self, x: Fraction) -> Fraction:
        """Exact image of a domain point; canonical representative in [0, 1)
        for wrapping branches."""
        y = self.slope * x + self.offset
        if self.wraps:
            y -= math.floor(y)
        return y


def _make_branch(slope, offset, lo, hi, wraps=False) -> Branch:
    return Branch(Fraction(slope), Fraction(offset), Fraction(lo), Fraction(hi), wraps)


@dataclass(frozen=True)
class PiecewiseAffineMVSystem:
    """A finite family of expanding affine branches with a metric flag.

    metric "interval" is the Euclidean distance on [0, 1]; "circle" the
    intrinsic distance on R/Z.  ``sturmian_arc`` is the arc length used when
    classifying orbits for this family (1/q for the q-fold correspondences,
    1/4 for the three-branch doubling family).
    """

    branches: tuple[Branch, ...]
    metric: str = "interval"
    name: str = "custom"
    sturmian_arc: Fraction | None = None

    def __post_init__(self):
        if not self.branches:
            raise ValueError("a system needs at least one branch")
        if self.metric not in ("interval", "circle"):
            raise ValueError("metric must be 'interval' or 'circle'")

    def min_expansion(self) -> Fraction:
        return min(abs(b.slope) for b in self.branches)


def three_branch_doubling() -> PiecewiseAffineMVSystem:
    """Doubling on [0, 1] with the extra middle branch 2x - 1/2 on [1/4, 3/4]."""
    return PiecewiseAffineMVSystem(
        branches=(
            _make_branch(2, 0, 0, Fraction(1, 2)),
            _make_branch(2, Fraction(-1, 2), Fraction(1, 4), Fraction(3, 4)),
            _make_branch(2, -1, Fraction(1, 2), 1),
        ),
        metric="interval",
        name="threebranch",
        sturmian_arc=Fraction(1, 4),
    )


def doubling_map() -> PiecewiseAffineMVSystem:
    """The doubling map on [0, 1] as two non-wrapping branches."""
    return PiecewiseAffineMVSystem(
        branches=(
            _make_branch(2, 0, 0, Fraction(1, 2)),
            _make_branch(2, -1, Fraction(1, 2), 1),
        ),
        metric="interval",
        name="doubling",
        sturmian_arc=Fraction(1, 2),
    )


def pq_correspondence(p: int, q: int) -> PiecewiseAffineMVSystem:
    """The circle correspondence x -> {(qx + j)/p : 0 <= j < p} for p < q."""
    if not (1 <= p < q):
        raise ValueError("need 1 <= p < q")
    branches = tuple(
        _make_branch(Fraction(q, p), Fraction(j, p), 0, 1, wraps=True) for j in range(p)
    )
    return PiecewiseAffineMVSystem(
        branches=branches,
        metric="circle",
        name=f"pq:{p},{q}",
        sturmian_arc=Fraction(1, q),
    )


# ---------------------------------------------------------------------------
# Expansion certificate


def circle_norm(x: Fraction) -> Fraction:
    """Intrinsic distance from x to the nearest integer."""
    frac = x - math.floor(x)
    return min(frac, 1 - frac)


def _range_norm_min(u: Fraction, v: Fraction, metric: str) -> Fraction:
    """Minimum metric norm of an affine value sweeping the interval [u, v]."""
    if u > v:
        u, v = v, u
    if metric == "interval":
        if u <= 0 <= v:
            return Fraction(0)
        return min(abs(u), abs(v))
    if math.floor(v) >= math.ceil(u):  # an integer lies in [u, v]
        return Fraction(0)
    return min(circle_norm(u), circle_norm(v))


def expansion_certificate(system: PiecewiseAffineMVSystem) -> tuple[Fraction, Fraction]:
    """Exact (lambda, eta) so that points within eta have all image pairs
    separated by at least lambda times their distance.

    Same-branch pairs expand by the slope; cross pairs are separated by
    sep - (|s_i| + |s_j|) * eta where sep is the minimal image separation on
    the interaction window, giving the linear constraint
    eta <= sep / (lambda + |s_i| + |s_j|).  On the circle, windows are also
    examined across the seam (domains shifted by one turn), where branch
    pairs that continue each other modulo 1 are glued rather than rejected.
    """
    lam = system.min_expansion()
    circle = system.metric == "circle"
    branches = system.branches
    constraints: list[Fraction] = [Fraction(1)]

    for i, b in enumerate(branches):
        s = abs(b.slope)
        if circle:
            constraints.append(Fraction(1, 2) / s)  # image distance stays un-wrapped
        elif b.wraps:
            constraints.append(Fraction(1) / (lam + s))  # images split at the seam

    shifts = (0, 1) if circle else (0,)
    for shift in shifts:
        for i, bi in enumerate(branches):
            for j, bj in enumerate(branches):
                if shift == 0 and j <= i:
                    continue  # unordered pairs once; (i, i, 0) is the slope case
                lo = max(bi.lo, bj.lo + shift)
                hi = min(bi.hi, bj.hi + shift)
                si, sj = abs(bi.slope), abs(bj.slope)
                if lo > hi:
                    # disjoint on this side: pairs closer than the gap are
                    # impossible, otherwise bound via the facing endpoints
                    gap = lo - hi
                    wi = bi.hi if bi.hi < lo else bi.lo
                    wj = bj.hi if bj.hi + shift < lo else bj.lo
                    val = bi.apply(wi) - bj.apply(wj)
                    sep0 = circle_norm(val) if circle else abs(val)
                    smax = max(si, sj)
                    constraints.append(max(gap, (sep0 + smax * gap) / (lam + smax)))
                    continue
                # common-parameter window: compare T_i(w) with T_j(w - shift)
                ds = bi.slope - bj.slope
                doff = bi.offset - bj.offset + bj.slope * shift
                u = ds * lo + doff
                v = ds * hi + doff
                sep = _range_norm_min(u, v, system.metric)
                if sep == 0:
                    identical = ds == 0 and (
                        doff == 0 if not circle else doff == math.floor(doff)
                    )
                    if identical and (lo < hi) and shift == 0:
                        raise NotExpandingError((i, j), "duplicated branch on an interval")
                    if identical:
                        continue  # the branches glue into one map across this window
                    raise NotExpandingError((i, j), "branch images collide on the overlap")
                constraints.append(sep / (lam + si + sj))

    return lam, min(constraints)


# ---------------------------------------------------------------------------
# Periodic orbits


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit with its branch itinerary and exact points, stored in
    the lexicographically least rotation of (points, itinerary)."""

    itinerary: tuple[int, ...]
    points: tuple[Fraction, ...]

    @property
    def period(self) -> int:
        return len(self.points)

    def itinerary_string(self) -> str:
        return "".join(str(i) for i in self.itinerary)


def orbit_is_valid(system: PiecewiseAffineMVSystem, orbit: PeriodicOrbit) -> bool:
    """Re-validate an orbit by exact forward iteration through its itinerary."""
    k = orbit.period
    if len(orbit.itinerary) != k or k == 0:
        return False
    for idx in range(k):
        b = system.branches[orbit.itinerary[idx]]
        x = orbit.points[idx]
        if not b.contains(x):
            return False
        if b.apply(x) != orbit.points[(idx + 1) % k]:
            return False
    return True


def for_each_necklace(length: int, alphabet: int, fn) -> None:
    """Visit every necklace (lexicographically least rotation, periodic words
    included) of the given length: FKM generation, lexicographic order.  The
    callback receives a reusable list; copy it if kept."""
    a = [0] * (length + 1)
    body = a  # fn sees a[1:length+1]

    def gen(t: int, p: int):
        if t > length:
            if length % p == 0:
                fn(body)
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, alphabet):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)


def necklaces(length: int, alphabet: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for_each_necklace(length, alphabet, lambda a: out.append(tuple(a[1:length + 1])))
    return out


def _interval_intersect(lo1, hi1, lo2, hi2):
    lo, hi = max(lo1, lo2), min(hi1, hi2)
    return (lo, hi) if lo <= hi else None


def _preimage_window(a: Fraction, b: Fraction, lo: Fraction, hi: Fraction):
    """Solve lo <= a*x + b <= hi for x (a != 0)."""
    x1 = (lo - b) / a
    x2 = (hi - b) / a
    return (x1, x2) if x1 <= x2 else (x2, x1)


def _solve_itinerary(system: PiecewiseAffineMVSystem, itinerary: tuple[int, ...]) -> list[tuple[Fraction, ...]]:
    """Exact fixed points of the composed branch map along one itinerary.

    Depth-first search over the integer lifts of wrapping branches, pruning
    with the feasibility interval of the starting point; every candidate is
    confirmed by exact forward iteration.
    """
    k = len(itinerary)
    first = system.branches[itinerary[0]]
    one = Fraction(1)
    candidates: list[Fraction] = []

    if not any(system.branches[i].wraps for i in set(itinerary)):
        # no integer lifts: one affine composition, a single fixed point
        a, b = one, Fraction(0)
        for step in range(k):
            br = system.branches[itinerary[step]]
            a, b = br.slope * a, br.slope * b + br.offset
        candidates.append(b / (1 - a))
    else:
        _lift_search(system, itinerary, candidates)

    orbits = []
    for x0 in sorted(set(candidates)):
        pts = [x0]
        ok = True
        for step in range(k):
            b = system.branches[itinerary[step]]
            x = pts[-1]
            if not b.contains(x) or (b.wraps and not (0 <= x < 1)):
                ok = False
                break
            pts.append(b.apply(x))
        if ok and pts[-1] == x0:
            orbits.append(tuple(pts[:k]))
    return orbits


def _lift_search(system: PiecewiseAffineMVSystem, itinerary: tuple[int, ...], candidates: list[Fraction]) -> None:
    """DFS over integer lifts of wrapping branches, pruning with the
    feasibility interval of the starting point."""
    k = len(itinerary)
    first = system.branches[itinerary[0]]
    one = Fraction(1)

    def descend(step: int, a: Fraction, b: Fraction, lo: Fraction, hi: Fraction):
        # invariant: x_step = a*x0 + b for feasible x0 in [lo, hi]
        branch = system.branches[itinerary[step % k]] if step < k else None
        if step == k:
            if a == 1:
                return
            x0 = b / (1 - a)
            if lo <= x0 <= hi:
                candidates.append(x0)
            return
        window = _preimage_window(a, b, branch.lo, branch.hi)
        clipped = _interval_intersect(lo, hi, *window)
        if clipped is None:
            return
        lo, hi = clipped
        a2 = branch.slope * a
        b2 = branch.slope * b + branch.offset
        if not branch.wraps:
            descend(step + 1, a2, b2, lo, hi)
            return
        img_lo, img_hi = sorted((a2 * lo + b2, a2 * hi + b2))
        for m in range(math.floor(img_lo), math.floor(img_hi) + 1):
            window = _preimage_window(a2, b2 - m, Fraction(0), one)
            clipped = _interval_intersect(lo, hi, *window)
            if clipped is not None:
                descend(step + 1, a2, b2 - m, *clipped)

    descend(0, one, Fraction(0), first.lo, first.hi)


def _primitive_period(points: tuple) -> int:
    k = len(points)
    for d in range(1, k):
        if k % d == 0 and all(points[i] == points[(i + d) % k] for i in range(k)):
            return d
    return k


def _canonical_rotation(points, itinerary) -> tuple[tuple, tuple]:
    k = len(points)
    best = None
    for r in range(k):
        cand = (tuple(points[r:]) + tuple(points[:r]),
                tuple(itinerary[r:]) + tuple(itinerary[:r]))
        if best is None or cand < best:
            best = cand
    return best


def _integer_path_params(system: PiecewiseAffineMVSystem):
    """(slopes, scaled offsets, common offset denominator) when every branch
    is non-wrapping with an integer slope; None otherwise."""
    slopes = []
    denom = 1
    for b in system.branches:
        if b.wraps or b.slope.denominator != 1:
            return None
        slopes.append(int(b.slope))
        d = b.offset.denominator
        denom = denom * d // math.gcd(denom, d)
    offsets = [int(b.offset * denom) for b in system.branches]
    return slopes, offsets, denom


def visit_periodic_orbits(system: PiecewiseAffineMVSystem, max_period: int, consume) -> None:
    """Stream every periodic orbit of period <= max_period, exactly.

    ``consume(word, numerators, denominator)`` receives the canonical-rotation
    branch word and the orbit points as integers over a positive common
    denominator.  One call per distinct point sequence (branch relabellings at
    domain boundaries are deduplicated); orbits arrive grouped by period.

    Non-wrapping systems with integer slopes run entirely in machine/bignum
    integer arithmetic; everything else goes through the rational lift search.
    """
    if not (1 <= max_period <= ORBIT_PERIOD_LIMIT):
        raise ValueError(f"max_period must be between 1 and {ORBIT_PERIOD_LIMIT}")
    n_branches = len(system.branches)
    params = _integer_path_params(system)

    if params is None:
        for k in range(1, max_period + 1):
            seen: set = set()
            for word in necklaces(k, n_branches):
                for pts in _solve_itinerary(system, word):
                    if _primitive_period(pts) != k:
                        continue
                    canon_pts, canon_itin = _canonical_rotation(pts, word)
                    if canon_pts in seen:
                        continue
                    seen.add(canon_pts)
                    denom = 1
                    for p in canon_pts:
                        denom = denom * p.denominator // math.gcd(denom, p.denominator)
                    consume(canon_itin, tuple(int(p * denom) for p in canon_pts), denom)
        return

    slopes, offsets, v_denom = params
    domains = [
        (b.lo.numerator, b.lo.denominator, b.hi.numerator, b.hi.denominator)
        for b in system.branches
    ]
    for k in range(1, max_period + 1):
        seen: set = set()

        def handle(buf, k=k, seen=seen):
            word = tuple(buf[1:k + 1])
            a_lin, b_lin = 1, 0
            for c in word:
                s = slopes[c]
                a_lin = s * a_lin
                b_lin = s * b_lin + offsets[c]
            d_raw = v_denom * (1 - a_lin)
            if d_raw > 0:
                denom, x = d_raw, b_lin
            else:
                denom, x = -d_raw, -b_lin
            scale = denom // v_denom  # |1 - a_lin|, exact
            xs = []
            for c in word:
                ln, ld, hn, hd = domains[c]
                if x * ld < ln * denom or x * hd > hn * denom:
                    return
                xs.append(x)
                x = slopes[c] * x + offsets[c] * scale
            if x != xs[0]:
                return
            for d in range(1, k):
                if k % d == 0 and xs[d:] + xs[:d] == xs:
                    return  # not primitive
            g = denom
            for value in xs:
                g = math.gcd(g, value)
                if g == 1:
                    break
            if g > 1:
                denom //= g
                xs = [value // g for value in xs]
            best = None
            for r in range(k):
                cand = (tuple(xs[r:]) + tuple(xs[:r]), word[r:] + word[:r])
                if best is None or cand < best:
                    best = cand
            key = (denom, best[0])
            if key in seen:
                return
            seen.add(key)
            consume(best[1], best[0], denom)

        for_each_necklace(k, n_branches, handle)


def enumerate_periodic_orbits(system: PiecewiseAffineMVSystem, max_period: int) -> list[PeriodicOrbit]:
    """All periodic orbits of period up to max_period, exactly.

    One representative per distinct point sequence; sorted by (period,
    points).  For large orbit sets prefer the streaming visitor.
    """
    found: list[PeriodicOrbit] = []

    def consume(word, numerators, denom):
        found.append(PeriodicOrbit(word, tuple(Fraction(x, denom) for x in numerators)))

    visit_periodic_orbits(system, max_period, consume)
    return sorted(found, key=lambda o: (o.period, o.points))


# ---------------------------------------------------------------------------
# Averages, barycentres, arcs


def orbit_average(orbit: PeriodicOrbit, f: Callable[[float], float]) -> float:
    """Mean of f over the orbit points (double precision)."""
    return sum(f(float(x)) for x in orbit.points) / orbit.period


def barycentre(orbit: PeriodicOrbit) -> complex:
    """Average of exp(2 pi i x) over the orbit points."""
    return sum(cmath.exp(2j * cmath.pi * float(x)) for x in orbit.points) / orbit.period


def is_sturmian(orbit_or_points, arc_length) -> bool:
    """True iff all points fit in a closed circular arc of the given length:
    sort on the circle and compare the largest gap with 1 - arc_length."""
    arc = Fraction(arc_length)
    if not (0 < arc <= 1):
        raise ValueError("arc length must be in (0, 1]")
    points = getattr(orbit_or_points, "points", orbit_or_points)
    circle_points = sorted({Fraction(p) - math.floor(Fraction(p)) for p in points})
    m = len(circle_points)
    if m <= 1:
        return True
    largest_gap = max(
        (circle_points[(i + 1) % m] - circle_points[i]) % 1 if i + 1 < m
        else circle_points[0] + 1 - circle_points[-1]
        for i in range(m)
    )
    return largest_gap >= 1 - arc
