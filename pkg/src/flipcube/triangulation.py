"""Triangulations, flips and Delaunay flipping.

Triangulations store edges as point-id pairs ``(i, j)`` with ``i < j``.
Combinatorial lookups (orientation signs, empty triangles, the diagonal
list) come from a per-point-set :class:`Tables` object, so everything here is
meant for desk-scale sets (a few hundred points at most).
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .errors import (AlreadyDelaunayError, CrossingInputError, DegenerateInputError,
                     InputError, InvalidTriangulationError, MismatchedPointSetsError,
                     NotFlippableError, NotInTriangulationError)
from .geom import InCircleResult, PointSet, hull_boundary_ids, in_circle

Diagonal = tuple  # (i, j) with i < j


def norm(e) -> tuple[int, int]:
    i, j = int(e[0]), int(e[1])
    return (i, j) if i < j else (j, i)


class Flip(NamedTuple):
    removed: tuple
    inserted: tuple

    def inverse(self) -> "Flip":
        return Flip(self.inserted, self.removed)


# ------------------------------------------------------------------ tables


class Tables:
    """Orientation signs, empty triangles and diagonals of one point set."""

    def __init__(self, P: PointSet):
        self.points = P
        n = self.n = len(P)
        self.orient = _kernels.orientation_tensor(P.xs, P.ys)
        self.empty_tri = _kernels.empty_triangles(self.orient)
        dm = _kernels.diagonal_matrix(P.xs, P.ys, self.orient)
        ii, jj = np.nonzero(np.triu(dm, 1))
        self.diagonals = list(zip(ii.tolist(), jj.tolist()))
        self.index = {d: k for k, d in enumerate(self.diagonals)}
        self.diag_a = ii.astype(np.int64)
        self.diag_b = jj.astype(np.int64)
        # faces that can sit on either side of each diagonal: (apex, mask of the other two edges)
        self.left: list[list[tuple[int, int]]] = []
        self.right: list[list[tuple[int, int]]] = []
        index = self.index
        for i, j in self.diagonals:
            lf, rt = [], []
            for k in np.nonzero(self.empty_tri[i, j])[0].tolist():
                m = (1 << index[norm((i, k))]) | (1 << index[norm((j, k))])
                (lf if self.orient[i, j, k] > 0 else rt).append((k, m))
            self.left.append(lf)
            self.right.append(rt)
        self.collinear = n < 3 or not self.orient.any()
        self.hull_ids = hull_boundary_ids(P)
        h = len(self.hull_ids)
        self.edge_count = n - 1 if self.collinear else 3 * n - 3 - h

    def crosses(self, e, f) -> bool:
        o = self.orient
        (i, j), (k, l) = e, f
        return int(o[i, j, k]) * int(o[i, j, l]) < 0 and int(o[k, l, i]) * int(o[k, l, j]) < 0

    def crosses_any(self, e, A, B) -> bool:
        if len(A) == 0:
            return False
        o = self.orient
        i, j = e
        s1 = o[i, j, A].astype(np.int16) * o[i, j, B]
        s2 = o[A, B, i].astype(np.int16) * o[A, B, j]
        return bool(np.any((s1 < 0) & (s2 < 0)))

    def face(self, mask: int, d: int, side: int) -> int:
        """Apex of the face on ``side`` (+1 left, -1 right) of diagonal d, or -1."""
        for k, m in (self.left[d] if side > 0 else self.right[d]):
            if mask & m == m:
                return k
        return -1

    def flip_target(self, mask: int, d: int) -> int:
        """Index of the diagonal replacing d in the triangulation ``mask``, or -1."""
        lf = self.face(mask, d, 1)
        if lf < 0:
            return -1
        rt = self.face(mask, d, -1)
        if rt < 0:
            return -1
        i, j = self.diagonals[d]
        o = self.orient
        if int(o[lf, rt, i]) * int(o[lf, rt, j]) >= 0:
            return -1
        return self.index[norm((lf, rt))]

    def flips(self, mask: int):
        """Yield (removed, inserted) diagonal indices of every flip of ``mask``."""
        m = mask
        while m:
            low = m & -m
            d = low.bit_length() - 1
            m ^= low
            t = self.flip_target(mask, d)
            if t >= 0:
                yield d, t

    def mask_of(self, edges) -> int:
        mask = 0
        for e in edges:
            mask |= 1 << self.index[e]
        return mask

    def edges_of(self, mask: int) -> list:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.diagonals[low.bit_length() - 1])
            mask ^= low
        return out


@functools.lru_cache(maxsize=64)
def tables(P: PointSet) -> Tables:
    return Tables(P)


# ----------------------------------------------------------- sheared frame


@dataclass(frozen=True)
class ShearedFrame:
    """An orientation-preserving shear that breaks every cocircularity.

    With axis "x" a point (x, y) maps to (N*x + k*y, N*y), i.e. the shear
    x -> x + (k/N)*y scaled by N; axis "y" shears the other coordinate.
    ``k == 0`` is the identity frame.
    """

    original: PointSet = field(repr=False)
    k: int
    N: int
    axis: str = "x"

    def map(self, x: int, y: int) -> tuple[int, int]:
        if self.k == 0:
            return (x, y)
        if self.axis == "x":
            return (self.N * x + self.k * y, self.N * y)
        return (self.N * x, self.N * y + self.k * x)

    @cached_property
    def sheared(self) -> PointSet:
        return PointSet(self.map(x, y) for x, y in self.original.coords)

    def in_circle(self, a: int, b: int, c: int, d: int) -> InCircleResult:
        S = self.sheared
        return in_circle(S[a], S[b], S[c], S[d])

    def raw_sign(self, coeffs) -> int:
        """Exact sign of the sheared raw determinant from its shear polynomial."""
        d0, d1, d2 = (int(v) for v in coeffs)
        v = d0 * self.N * self.N + d1 * self.k * self.N + d2 * self.k * self.k
        return (v > 0) - (v < 0)

    def raw_signs(self, coeffs: np.ndarray) -> np.ndarray:
        """Vectorised :meth:`raw_sign`; relies on N exceeding the coefficient bound."""
        c = np.asarray(coeffs)
        s0 = np.sign(c[:, 0]).astype(np.int64)
        if self.k == 0:
            return s0
        s1 = np.sign(c[:, 1]).astype(np.int64)
        s2 = np.sign(c[:, 2]).astype(np.int64)
        return np.where(s0 != 0, s0, np.where(s1 != 0, s1, s2))


_BASE_N = 1 << 32
_EXHAUSTIVE_LIMIT = 500_000


def shear_modulus(P: PointSet) -> int:
    """Smallest power of two >= 2**32 that dominates every shear coefficient.

    With coordinate span W the linear and quadratic coefficients of the
    sheared in-circle determinant satisfy |c1| + |c2| <= 18 W**4, so any
    N > 36 W**4 makes the k = 1 determinant vanish only when all three
    coefficients do, and its sign is the first nonzero coefficient's.
    """
    xs, ys = P.xs, P.ys
    span = max(max(xs) - min(xs), max(ys) - min(ys)) if len(P) else 0
    need = 36 * span ** 4 + 1
    return max(_BASE_N, 1 << need.bit_length())


def _quad_collinear(P: PointSet, quads: np.ndarray) -> np.ndarray:
    xs = np.array(P.xs, dtype=object)
    ys = np.array(P.ys, dtype=object)
    a, b, c, d = (quads[:, i] for i in range(4))

    def det(p, q, r):
        return (xs[q] - xs[p]) * (ys[r] - ys[p]) - (ys[q] - ys[p]) * (xs[r] - xs[p])

    return (det(a, b, c) == 0) & (det(a, b, d) == 0) & (det(a, c, d) == 0)


def decocircularize(P: PointSet, quads=None, axis: str | None = None) -> ShearedFrame:
    """Find a shear under which no relevant 4-subset of P is cocircular.

    ``quads`` restricts the check to the given 4-tuples of ids (the default
    is every 4-subset).  Four collinear points are never cocircular.  The
    search tries k = 0 (identity) and then k = 1, 2, ... with N from
    :func:`shear_modulus`; if some quadruple stays cocircular for every k
    on one axis the other axis is tried.
    """
    n = len(P)
    if n < 3:
        raise InputError("decocircularize needs at least 3 points")
    N = shear_modulus(P)
    if quads is None:
        if comb(n, 4) > _EXHAUSTIVE_LIMIT:
            # too many to verify; k = 1 is correct unless a quadruple vanishes identically
            return ShearedFrame(P, 1, N, axis or "x")
        quads = np.array(list(combinations(range(n), 4)), dtype=np.int64).reshape(-1, 4)
    quads = np.asarray(quads, dtype=np.int64).reshape(-1, 4)
    if len(quads) == 0:
        return ShearedFrame(P, 0, N, axis or "x")
    relevant = ~_quad_collinear(P, quads)
    for ax in ([axis] if axis else ["x", "y"]):
        coeffs = _kernels.incircle_coeffs(P.xs, P.ys, quads, swap=(ax == "y"))[relevant]
        if len(coeffs) == 0 or np.all(coeffs[:, 0] != 0):
            return ShearedFrame(P, 0, N, ax)
        for k in range(1, 4):
            frame = ShearedFrame(P, k, N, ax)
            if k == 1:
                ok = np.all(np.any(coeffs != 0, axis=1))
            else:
                ok = all(frame.raw_sign(c) != 0 for c in coeffs)
            if ok:
                return frame
    raise DegenerateInputError("no shear removes every cocircular quadruple")


@functools.lru_cache(maxsize=64)
def default_frame(P: PointSet) -> ShearedFrame:
    return decocircularize(P)


# ------------------------------------------------------------ triangulation


class Triangulation:
    """A maximal set of pairwise non-crossing diagonals of a point set."""

    __slots__ = ("points", "edges", "_mask", "__weakref__")

    def __init__(self, points: PointSet, edges: Iterable, validate: bool = True):
        self.points = points
        self.edges = frozenset(norm(e) for e in edges)
        self._mask = None
        if validate:
            validate_triangulation(self)

    @classmethod
    def from_mask(cls, points: PointSet, mask: int) -> "Triangulation":
        t = cls(points, tables(points).edges_of(mask), validate=False)
        t._mask = mask
        return t

    @property
    def mask(self) -> int:
        if self._mask is None:
            self._mask = tables(self.points).mask_of(self.edges)
        return self._mask

    @property
    def key(self) -> tuple:
        return tuple(sorted(self.edges))

    def triangles(self) -> list[tuple[int, int, int]]:
        tb = tables(self.points)
        out = set()
        mask = self.mask
        for e in self.edges:
            d = tb.index[e]
            for side in (1, -1):
                k = tb.face(mask, d, side)
                if k >= 0:
                    out.add(tuple(sorted((e[0], e[1], k))))
        return sorted(out)

    def __contains__(self, e):
        return norm(e) in self.edges

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        return (isinstance(other, Triangulation) and self.points == other.points
                and self.edges == other.edges)

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"Triangulation({sorted(self.edges)})"


def validate_triangulation(T: Triangulation) -> None:
    P = T.points
    tb = tables(P)
    n = len(P)
    for e in T.edges:
        if not (0 <= e[0] < n and 0 <= e[1] < n) or e[0] == e[1]:
            raise InvalidTriangulationError(f"edge {e} does not name two points")
        if e not in tb.index:
            raise InvalidTriangulationError(f"edge {e} is not a diagonal")
    edges = sorted(T.edges)
    A = np.array([e[0] for e in edges], dtype=np.int64)
    B = np.array([e[1] for e in edges], dtype=np.int64)
    for e in edges:
        if tb.crosses_any(e, A, B):
            raise InvalidTriangulationError(f"edge {e} crosses another edge")
    if len(edges) != tb.edge_count:
        raise InvalidTriangulationError(
            f"{len(edges)} edges, a triangulation of this set has {tb.edge_count}")


def _same_points(T1: Triangulation, T2: Triangulation) -> None:
    if T1.points != T2.points:
        raise MismatchedPointSetsError("triangulations are over different point sets")


def complete_to_triangulation(P: PointSet, E: Iterable = ()) -> Triangulation:
    """Extend non-crossing diagonals E greedily, in lexicographic id order."""
    tb = tables(P)
    chosen = []
    for e in E:
        e = norm(e)
        if e not in tb.index:
            raise CrossingInputError(f"{e} is not a diagonal")
        if e not in chosen:
            chosen.append(e)
    for e, f in combinations(chosen, 2):
        if tb.crosses(e, f):
            raise CrossingInputError(f"{e} and {f} cross")
    A = [e[0] for e in chosen]
    B = [e[1] for e in chosen]
    have = set(chosen)
    for d in tb.diagonals:
        if d in have:
            continue
        if not tb.crosses_any(d, np.array(A, dtype=np.int64), np.array(B, dtype=np.int64)):
            A.append(d[0])
            B.append(d[1])
            have.add(d)
    return Triangulation(P, have, validate=False)


def flippable_edges(T: Triangulation) -> list[Flip]:
    tb = tables(T.points)
    out = [Flip(tb.diagonals[d], tb.diagonals[t]) for d, t in tb.flips(T.mask)]
    out.sort()
    return out


def apply_flip(T: Triangulation, f: Flip) -> Triangulation:
    tb = tables(T.points)
    removed, inserted = norm(f[0]), norm(f[1])
    d = tb.index.get(removed)
    if d is None or removed not in T.edges:
        raise NotFlippableError(f"{removed} is not an edge of the triangulation")
    t = tb.flip_target(T.mask, d)
    if t < 0 or tb.diagonals[t] != inserted:
        raise NotFlippableError(f"{removed} cannot be flipped to {inserted}")
    return Triangulation.from_mask(T.points, T.mask ^ (1 << d) ^ (1 << t))


# ------------------------------------------------------------------ Delaunay


def _illegal(tb: Tables, frame: ShearedFrame, mask: int, d: int) -> int:
    """Replacement index when diagonal d fails the local empty-circle test, else -1."""
    t = tb.flip_target(mask, d)
    if t < 0:
        return -1
    i, j = tb.diagonals[d]
    lf = tb.face(mask, d, 1)
    rt = tb.face(mask, d, -1)
    res = frame.in_circle(i, j, lf, rt)
    if res == InCircleResult.COCIRCULAR:
        raise DegenerateInputError(f"points {i, j, lf, rt} are cocircular in the frame")
    return t if res == InCircleResult.INSIDE else -1


def _lawson(P: PointSet, frame: ShearedFrame, fixed: Iterable = ()) -> Triangulation:
    tb = tables(P)
    mask = complete_to_triangulation(P, fixed).mask
    keep = {tb.index[norm(e)] for e in fixed}
    todo = list(range(len(tb.diagonals)))
    while todo:
        d = todo.pop()
        if not (mask >> d) & 1 or d in keep:
            continue
        t = _illegal(tb, frame, mask, d)
        if t < 0:
            continue
        i, j = tb.diagonals[d]
        k, l = tb.diagonals[t]
        mask ^= (1 << d) | (1 << t)
        for a in (i, j):
            for b in (k, l):
                todo.append(tb.index[norm((a, b))])
    return Triangulation.from_mask(P, mask)


@functools.lru_cache(maxsize=64)
def _delaunay_cached(P: PointSet) -> Triangulation:
    return _lawson(P, default_frame(P))


def delaunay(P: PointSet, frame: ShearedFrame | None = None) -> Triangulation:
    """The Delaunay triangulation of P in its decocircularised frame."""
    if len(P) < 3 or P.all_collinear():
        raise DegenerateInputError("all points are collinear")
    if frame is None:
        return _delaunay_cached(P)
    return _lawson(P, frame)


def constrained_delaunay(P: PointSet, fixed: Iterable) -> Triangulation:
    """Lawson flipping that never removes the non-crossing diagonals in ``fixed``."""
    if len(P) < 3 or P.all_collinear():
        return complete_to_triangulation(P, fixed)
    return _lawson(P, default_frame(P), list(fixed))


def any_triangulation(P: PointSet) -> Triangulation:
    """Delaunay when defined, else the unique chain of a collinear set."""
    if len(P) >= 3 and not P.all_collinear():
        return delaunay(P)
    return complete_to_triangulation(P)


def delaunay_flip(P: PointSet, ac, T: Triangulation) -> Flip:
    """The Delaunay flip of edge ac inside T."""
    if T.points != P:
        raise MismatchedPointSetsError("triangulation is over a different point set")
    ac = norm(ac)
    if ac not in T.edges:
        raise NotInTriangulationError(f"{ac} is not an edge of the triangulation")
    if ac in delaunay(P).edges:
        raise AlreadyDelaunayError(f"{ac} is a Delaunay edge")
    tb = tables(P)
    t = _illegal(tb, default_frame(P), T.mask, tb.index[ac])
    if t < 0:
        raise NotFlippableError(f"{ac} has no Delaunay flip inside this triangulation")
    return Flip(ac, tb.diagonals[t])


def flips_to_delaunay(T: Triangulation) -> list[Flip]:
    """Delaunay flips from T to the Delaunay triangulation.

    Each step flips the lexicographically least edge that fails the local
    empty-circle test; such an edge always exists until T is Delaunay.
    """
    P = T.points
    if len(P) < 3 or P.all_collinear():
        return []
    tb = tables(P)
    frame = default_frame(P)
    mask = T.mask
    out = []
    while True:
        for d in _bits(mask):
            t = _illegal(tb, frame, mask, d)
            if t >= 0:
                out.append(Flip(tb.diagonals[d], tb.diagonals[t]))
                mask ^= (1 << d) | (1 << t)
                break
        else:
            return out


def _bits(mask: int):
    # diagonals are indexed in lexicographic order, so ascending bits = ascending edges
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
