"""Exact planar predicates and convex hulls over rational coordinates.

Float inputs are converted to Fractions (binary floats are exact rationals),
so orientation decisions never suffer rounding.
"""

from __future__ import annotations

from fractions import Fraction


def _frac_point(p) -> tuple[Fraction, Fraction]:
    return Fraction(p[0]), Fraction(p[1])


def orientation(o, a, b) -> int:
    """Sign of the cross product (a - o) x (b - o): 1 for a left turn,
    -1 for a right turn, 0 for collinear.  Exact."""
    ox, oy = _frac_point(o)
    ax, ay = _frac_point(a)
    bx, by = _frac_point(b)
    cross = (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    return (cross > 0) - (cross < 0)


def convex_hull(points) -> list[tuple[Fraction, Fraction]]:
    """Vertices of the convex hull in counter-clockwise order, starting from
    the lexicographically smallest point.  Collinear boundary points are not
    vertices.  Monotone chain with exact orientation."""
    pts = sorted(set(_frac_point(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[tuple[Fraction, Fraction]] = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[Fraction, Fraction]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all points collinear
        return [pts[0], pts[-1]]
    return hull


def is_convex_polygon(vertices) -> bool:
    """True iff the vertex sequence is a strictly convex ccw polygon."""
    k = len(vertices)
    if k < 3:
        return True
    for i in range(k):
        if orientation(vertices[i], vertices[(i + 1) % k], vertices[(i + 2) % k]) <= 0:
            return False
    return True
