"""Exact planar predicates over integer coordinates.

Nothing here touches floating point: determinants are evaluated with Python
integers, so every sign is exact regardless of coordinate size.
"""
from __future__ import annotations

import enum
from typing import Iterable, NamedTuple, Sequence

from .errors import CollinearCircleError, DuplicatePointError, InputError


class Point(NamedTuple):
    x: int
    y: int
    id: int = -1


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


class InCircleResult(enum.IntEnum):
    OUTSIDE = -1
    COCIRCULAR = 0
    INSIDE = 1


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


class PointSet:
    """An immutable, duplicate-free sequence of integer points.

    Point ids are positions in the sequence.  Equality and hashing go by the
    coordinate tuple, so two sets with the same points in the same order are
    interchangeable (derived tables are cached per set).
    """

    __slots__ = ("points", "_coords", "_hash")

    def __init__(self, coords: Iterable[Sequence[int]]):
        pts = []
        seen = {}
        for i, c in enumerate(coords):
            x, y = c[0], c[1]
            if isinstance(x, bool) or isinstance(y, bool) or int(x) != x or int(y) != y:
                raise InputError(f"point {i} has non-integer coordinates {c!r}")
            x, y = int(x), int(y)
            if (x, y) in seen:
                raise DuplicatePointError(
                    f"points {seen[(x, y)]} and {i} coincide at ({x}, {y})")
            seen[(x, y)] = i
            pts.append(Point(x, y, i))
        self.points = tuple(pts)
        self._coords = tuple((p.x, p.y) for p in pts)
        self._hash = hash(self._coords)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other):
        return isinstance(other, PointSet) and self._coords == other._coords

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"PointSet({list(self._coords)!r})"

    @property
    def coords(self):
        return self._coords

    @property
    def xs(self):
        return [c[0] for c in self._coords]

    @property
    def ys(self):
        return [c[1] for c in self._coords]

    def all_collinear(self) -> bool:
        if len(self) < 3:
            return True
        a = self.points[0]
        b = self.points[1]
        return all(orient_det(a, b, c) == 0 for c in self.points[2:])


def orient_det(a, b, c) -> int:
    """Twice the signed area of triangle abc."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orientation(a, b, c) -> Orientation:
    return Orientation(_sign(orient_det(a, b, c)))


def incircle_det(a, b, c, d) -> int:
    """Raw in-circle determinant; positive iff d is inside circle(a, b, c) for ccw abc."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    return ((adx * adx + ady * ady) * (bdx * cdy - bdy * cdx)
            + (bdx * bdx + bdy * bdy) * (cdx * ady - cdy * adx)
            + (cdx * cdx + cdy * cdy) * (adx * bdy - ady * bdx))


def in_circle(a, b, c, d) -> InCircleResult:
    """Position of d relative to the circle through a, b, c (any orientation)."""
    o = _sign(orient_det(a, b, c))
    if o == 0:
        raise CollinearCircleError(f"{tuple(a[:2])}, {tuple(b[:2])}, {tuple(c[:2])} are collinear")
    return InCircleResult(o * _sign(incircle_det(a, b, c, d)))


def on_segment(p, a, b) -> bool:
    """p lies on the closed segment ab."""
    if orient_det(a, b, p) != 0:
        return False
    return (p[0] - a[0]) * (p[0] - b[0]) + (p[1] - a[1]) * (p[1] - b[1]) <= 0


def segments_cross(a, b, c, d) -> bool:
    """Proper crossing: the open segments meet in one point interior to both."""
    o1 = _sign(orient_det(a, b, c))
    o2 = _sign(orient_det(a, b, d))
    o3 = _sign(orient_det(c, d, a))
    o4 = _sign(orient_det(c, d, b))
    return o1 * o2 < 0 and o3 * o4 < 0


def is_diagonal(P: PointSet, a, b) -> bool:
    """No point of P other than a and b lies on the closed segment ab."""
    ka, kb = (a[0], a[1]), (b[0], b[1])
    for p in P:
        k = (p.x, p.y)
        if k != ka and k != kb and on_segment(p, a, b):
            return False
    return True


def convex_hull(points) -> list:
    """Strict hull vertices in counterclockwise order (monotone chain).

    Points interior to hull edges are not vertices.  One or two input points
    come back unchanged; collinear input gives the two extreme points.
    """
    pts = sorted(set(points), key=lambda p: (p[0], p[1]))
    if len(pts) <= 2:
        return list(pts)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient_det(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull


def in_convex_polygon(p, hull) -> bool:
    """p lies in the closed convex polygon given by ccw strict vertices (>= 3)."""
    k = len(hull)
    return all(orient_det(hull[i], hull[(i + 1) % k], p) >= 0 for i in range(k))


def is_empty_kgon(P: PointSet, S) -> bool:
    """S is in strictly convex position and CH(S) holds no other point of P."""
    S = list(S)
    if len(S) < 3:
        raise InputError("an empty k-gon needs k >= 3 points")
    keys = {(s[0], s[1]) for s in S}
    if len(keys) != len(S):
        return False
    hull = convex_hull(S)
    if len(hull) != len(S):
        return False
    return not any((p.x, p.y) not in keys and in_convex_polygon(p, hull) for p in P)


def hull_boundary_ids(P: PointSet) -> list[int]:
    """Ids of every point on the hull boundary, collinear edge points included."""
    hull = convex_hull(P.points)
    if len(hull) <= 2:
        return [p.id for p in P]
    k = len(hull)
    return [p.id for p in P
            if any(on_segment(p, hull[i], hull[(i + 1) % k]) for i in range(k))]
