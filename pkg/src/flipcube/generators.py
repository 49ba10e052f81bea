"""Deterministic point-set families.

Every family marked pentagon-free is checked with the fast pentagon detector
after generation, so a bad parameter choice fails loudly instead of silently
producing the wrong kind of fixture.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InvalidParamsError, MaskNotOnHullError
from .geom import (PointSet, convex_hull, in_convex_polygon, incircle_det, on_segment,
                   orient_det)
from .quadgraph import find_empty_pentagon


class Family(str, enum.Enum):
    LATTICE = "lattice"
    TWO_LINES = "two-lines"
    THREE_RAYS = "three-rays"
    TWO_WEDGES = "two-wedges"
    WEDGE_SEGMENT = "wedge-segment"
    QUAD_SEGMENT = "quad-segment"
    LATTICE_HULL_REMOVED = "lattice-hull-removed"
    KARA_ROWS = "kara-rows"
    CONVEX_NGON = "convex-ngon"
    RANDOM_GENERAL_POSITION = "random"


PENTAGON_FREE = frozenset(Family) - {Family.CONVEX_NGON, Family.RANDOM_GENERAL_POSITION}

# name -> (parameter names, defaults)
PARAMS = {
    Family.LATTICE: (("w", "h"), (3, 3)),
    Family.TWO_LINES: (("a", "b", "parallel"), (5, 5, 1)),
    Family.THREE_RAYS: (("k", "apex"), (3, 1)),
    Family.TWO_WEDGES: (("k", "d"), (2, 1)),
    Family.WEDGE_SEGMENT: (("k", "m", "d"), (2, 2, 2)),
    Family.QUAD_SEGMENT: (("m",), (4,)),
    Family.LATTICE_HULL_REMOVED: (("w", "h", "mask"), (3, 3, 0)),
    Family.KARA_ROWS: (("xmin", "xmax"), (0, 24)),
    Family.CONVEX_NGON: (("n",), (6,)),
    Family.RANDOM_GENERAL_POSITION: (("n", "box"), (8, 64)),
}


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    params: tuple = ()
    seed: int = 0
    window: tuple | None = field(default=None)

    def resolved(self) -> dict:
        names, defaults = PARAMS[Family(self.family)]
        if len(self.params) > len(names):
            raise InvalidParamsError(f"{self.family.value} takes at most {len(names)} parameters")
        vals = list(self.params) + list(defaults[len(self.params):])
        return dict(zip(names, vals))


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParamsError(msg)


def lattice(w: int, h: int) -> list:
    _need(w >= 1 and h >= 1, "lattice needs w, h >= 1")
    return [(x, y) for y in range(h) for x in range(w)]


def two_lines(a: int, b: int, parallel: int = 1) -> list:
    _need(a >= 0 and b >= 0 and a + b >= 1, "two-lines needs a, b >= 0")
    first = [(i, 0) for i in range(a)]
    if parallel:
        return first + [(i, 1) for i in range(b)]
    return first + [(i, i + 1) for i in range(b)]


def three_rays(k: int, apex: int = 1) -> list:
    _need(k >= 1, "three-rays needs k >= 1")
    pts = [(0, 0)] if apex else []
    for dx, dy in ((1, 0), (0, 1), (-1, -1)):
        pts += [(t * dx, t * dy) for t in range(1, k + 1)]
    return pts


def two_wedges(k: int, d: int) -> list:
    """Boundaries of y >= |x| and y <= -d - |x|, k points per ray plus apexes."""
    _need(k >= 0 and d >= 1, "two-wedges needs k >= 0, d >= 1")
    pts = [(0, 0), (0, -d)]
    for t in range(1, k + 1):
        pts += [(t, t), (-t, t), (t, -d - t), (-t, -d - t)]
    return pts


def wedge_segment(k: int, m: int, d: int) -> list:
    """Boundary of y >= |x| plus the points (x, -d), |x| <= m, of a segment below."""
    _need(k >= 0 and 0 <= m <= d and d >= 1, "wedge-segment needs k >= 0, 0 <= m <= d")
    pts = [(0, 0)]
    for t in range(1, k + 1):
        pts += [(t, t), (-t, t)]
    return pts + [(x, -d) for x in range(-m, m + 1)]


def quad_segment(m: int) -> list:
    """A convex quadrilateral and m points on a segment joining its left and right sides."""
    _need(m >= 1, "quad-segment needs m >= 1")
    quad = [(-2, -1), (m + 2, -2), (m + 1, 4), (-1, 3)]
    return quad + [(i, 1) for i in range(m)]


def lattice_hull_removed(w: int, h: int, mask=()) -> PointSet:
    """The w x h lattice without the given hull-boundary points.

    ``mask`` is an iterable of (x, y) points, or an int whose bit i removes
    point i of the row-major lattice.
    """
    base = lattice(w, h)
    if isinstance(mask, (int, np.integer)):
        _need(0 <= mask < 1 << len(base), "mask selects points outside the lattice")
        mask = [base[i] for i in range(len(base)) if (int(mask) >> i) & 1]
    drop = {tuple(int(v) for v in p) for p in mask}
    hull = convex_hull(base)
    on_hull = {p for p in base if len(hull) < 3 or any(
        on_segment(p, hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull)))}
    bad = sorted(drop - on_hull)
    if bad:
        raise MaskNotOnHullError(f"points {bad} are not on the lattice hull boundary")
    return PointSet([p for p in base if p not in drop])


_KARA_STEPS = ((0, 6), (2, 4), (3, 3), (6, 12))


def kara_rows(xmin: int, xmax: int) -> list:
    """Points (12i, 6), (3i, 3), (4i, 2), (6i, 0) with xmin <= x <= xmax.

    The strip is a convex window on the infinite four-row set.
    """
    _need(xmin <= xmax, "kara-rows needs xmin <= xmax")
    pts = []
    for y, step in _KARA_STEPS:
        first = -(-xmin // step)
        pts += [(step * i, y) for i in range(first, xmax // step + 1)]
    return pts


def kara_rows_by_index(lo: int, hi: int) -> list:
    """The same rows cut by index, lo <= i <= hi on every row.

    Not a convex window: rows end at different x, and the result can contain
    an empty pentagon (e.g. lo=0, hi=3).
    """
    _need(lo <= hi, "kara-rows needs lo <= hi")
    pts = []
    for y, step in _KARA_STEPS:
        pts += [(step * i, y) for i in range(lo, hi + 1)]
    return pts


def convex_ngon(n: int) -> list:
    _need(n >= 1, "convex-ngon needs n >= 1")
    return [(i, i * i) for i in range(n)]


def random_general_position(n: int, box: int, seed: int = 0, max_tries: int = 100_000) -> list:
    """n distinct points in [0, box)^2, no three collinear, no four cocircular."""
    _need(n >= 0 and box >= 1, "random needs n >= 0, box >= 1")
    _need(n <= box * box, "box too small for n points")
    rng = np.random.default_rng(seed)
    pts: list = []
    tries = 0
    while len(pts) < n:
        tries += 1
        if tries > max_tries:
            raise InvalidParamsError(f"could not place {n} points in general position in a {box} box")
        p = tuple(int(v) for v in rng.integers(0, box, size=2))
        if p in pts or not _general_with(pts, p):
            continue
        pts.append(p)
    return pts


def _general_with(pts: list, p) -> bool:
    for a, b in combinations(pts, 2):
        if orient_det(a, b, p) == 0:
            return False
    for a, b, c in combinations(pts, 3):
        if incircle_det(a, b, c, p) == 0:
            return False
    return True


def clip_to_window(P: PointSet, window) -> PointSet:
    """Points of P inside the closed convex polygon spanned by ``window``."""
    hull = convex_hull([tuple(w) for w in window])
    _need(len(hull) >= 3, "window must span a polygon")
    return PointSet([p[:2] for p in P if in_convex_polygon(p, hull)])


_BUILDERS = {
    Family.LATTICE: lattice,
    Family.TWO_LINES: two_lines,
    Family.THREE_RAYS: three_rays,
    Family.TWO_WEDGES: two_wedges,
    Family.WEDGE_SEGMENT: wedge_segment,
    Family.QUAD_SEGMENT: quad_segment,
    Family.KARA_ROWS: kara_rows,
    Family.CONVEX_NGON: convex_ngon,
}


def generate(spec: FamilySpec) -> PointSet:
    family = Family(spec.family)
    args = spec.resolved()
    for name, v in args.items():
        _need(isinstance(v, (int, np.integer)) or name == "mask", f"parameter {name} must be an integer")
    if family is Family.RANDOM_GENERAL_POSITION:
        P = PointSet(random_general_position(args["n"], args["box"], spec.seed))
    elif family is Family.LATTICE_HULL_REMOVED:
        P = lattice_hull_removed(args["w"], args["h"], args["mask"])
    else:
        P = PointSet(_BUILDERS[family](**args))
    if spec.window is not None:
        P = clip_to_window(P, spec.window)
    if family in PENTAGON_FREE:
        w = find_empty_pentagon(P)
        if w is not None:
            raise InvalidParamsError(
                f"{family.value}{tuple(args.values())} produced an empty pentagon {w.ids}")
    return P


def named_fixtures() -> dict[str, PointSet]:
    """Small hand-checked sets used throughout the tests."""
    return {
        "grid3x3": PointSet(lattice(3, 3)),
        "hexagon": PointSet([(0, 0), (2, 0), (3, 1), (3, 3), (1, 3), (0, 1)]),
        "pentagon": PointSet(convex_ngon(5)),
        "square": PointSet([(0, 0), (1, 0), (1, 1), (0, 1)]),
        "two_lines_5_5": PointSet(two_lines(5, 5)),
        # two three-point lines crossing at (2, 2), plus one point below
        "dilation_free": PointSet([(1, 2), (2, 0), (2, 2), (3, 2), (4, 4), (6, 6)]),
    }
