"""Empty pentagons, empty quadrilaterals and the quadrilateral graph.

The quadrilateral graph has one vertex per diagonal of P and an edge between
two crossing diagonals whose four endpoints form an empty quadrilateral.
Its edges are exactly the flips available anywhere in the flip graph.

Two builders are provided.  :func:`build_qg_general` is a direct brute-force
scan and serves as a reference.  :func:`build_qg_pentagon_free` sweeps the
points bottom to top, triangulating the radial fan above each point; it is
quadratic up to the sort and raises when the fan reveals an empty pentagon.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .errors import DegenerateInputError, NotAForestError, PentagonExistsError
from .geom import InCircleResult, Point, PointSet, convex_hull, is_diagonal, is_empty_kgon
from .triangulation import (complete_to_triangulation, default_frame, flippable_edges, norm,
                            tables)


class PentagonWitness(NamedTuple):
    """Five points of P spanning an empty convex pentagon, counterclockwise."""

    vertices: tuple

    @property
    def ids(self) -> list[int]:
        return [p.id for p in self.vertices]


# ------------------------------------------------------------ preprocessing


class _Tilted(NamedTuple):
    xs: np.ndarray
    ys: np.ndarray
    fast: bool
    by_y: np.ndarray   # ids sorted by tilted y
    k: int


def _tilt(P: PointSet) -> _Tilted:
    """Shear y -> y + k*x with the least k >= 0 that makes all y distinct.

    Shears preserve every orientation, so diagonals, empty polygons and the
    quadrilateral graph are unchanged; only the notion of "above" moves.
    """
    xs, ys = P.xs, P.ys
    k = 0
    while True:
        ty = [y + k * x for x, y in zip(xs, ys)]
        if len(set(ty)) == len(ty):
            break
        k += 1
    ax, ay, fast = _kernels.coord_arrays(xs, ty)
    by_y = np.argsort(np.array(ty, dtype=object) if not fast else ay, kind="stable")
    return _Tilted(ax, ay, fast, by_y.astype(np.int64), k)


def radial_orders(P: PointSet) -> dict[int, list[int]]:
    """For each point q, the points above q in counterclockwise order around q.

    "Above" is taken after the tilt of :func:`_tilt`.  Points on a common ray
    from q are listed nearest first.
    """
    t = _tilt(P)
    out = {}
    for r, q in enumerate(t.by_y.tolist()):
        above = t.by_y[r + 1:]
        out[q] = _kernels.radial_sort(t.xs, t.ys, q, above, t.fast).tolist()
    return out


# ------------------------------------------------------------ pentagon test


def pentagon_at_apex(q: Point, above_sorted: Sequence[Point]) -> PentagonWitness | None:
    """Empty pentagon with q as its lowest vertex, given the sorted points above q.

    ``above_sorted`` must be every point of P above q, in counterclockwise
    order around q (nearest first along a shared ray).
    """
    if len(above_sorted) < 4:
        return None
    pts = [q, *above_sorted]
    xs, ys, fast = _kernels.coord_arrays([p[0] for p in pts], [p[1] for p in pts])
    order = np.arange(1, len(pts), dtype=np.int64)
    _, _, pent = _kernels.fan(xs, ys, 0, order, fast)
    if pent is None:
        return None
    return PentagonWitness(tuple(pts[i] for i in (0, *pent.tolist())))


def find_empty_pentagon(P: PointSet) -> PentagonWitness | None:
    """Some empty convex pentagon of P, or None.  Lowest apex wins."""
    if len(P) < 5:
        return None
    t = _tilt(P)
    _, _, hit = _kernels.scan_apexes(t.xs, t.ys, t.by_y, t.fast, False)
    if hit is None:
        return None
    apex, pent = hit
    return PentagonWitness(tuple(P[i] for i in (apex, *pent.tolist())))


def brute_force_empty_pentagon(P: PointSet) -> PentagonWitness | None:
    """Reference scan over all 5-subsets (exponential; small sets only)."""
    for S in combinations(P.points, 5):
        if is_empty_kgon(P, S):
            return PentagonWitness(tuple(convex_hull(S)))
    return None


# ------------------------------------------------------------ quad graph


@dataclass(frozen=True, eq=False)
class QuadGraph:
    """Quadrilateral graph of a point set.

    ``diagonals`` is an (D, 2) array of id pairs in lexicographic order; vertex
    ids are row numbers.  ``edges`` is an (E, 2) array of vertex-id pairs with
    the smaller id first.  ``arcs``, when present, orients every edge (row-for-row
    with ``edges``) from the diagonal that is not locally Delaunay in its
    quadrilateral toward the one that is.
    """

    points: PointSet
    diagonals: np.ndarray
    edges: np.ndarray
    arcs: np.ndarray | None = None

    @property
    def n_vertices(self) -> int:
        return len(self.diagonals)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {(int(a), int(b)): k for k, (a, b) in enumerate(self.diagonals.tolist())}

    def vertex(self, d) -> int:
        i, j = int(d[0]), int(d[1])
        return self.index[(i, j) if i < j else (j, i)]

    @cached_property
    def adjacency(self) -> csr_matrix:
        D = self.n_vertices
        u, v = self.edges[:, 0], self.edges[:, 1]
        data = np.ones(2 * len(u), dtype=np.int8)
        return csr_matrix((data, (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(D, D))

    @cached_property
    def components(self) -> tuple[int, np.ndarray]:
        return connected_components(self.adjacency, directed=False)

    def is_forest(self) -> bool:
        ncomp, _ = self.components
        return self.n_edges == self.n_vertices - ncomp

    @cached_property
    def heads(self) -> np.ndarray:
        """heads[v] is the out-neighbour of v, or -1; requires out-degree <= 1."""
        if self.arcs is None:
            raise ValueError("quadrilateral graph is not oriented")
        heads = np.full(self.n_vertices, -1, dtype=np.int64)
        tails = self.arcs[:, 0]
        if len(np.unique(tails)) != len(tails):
            raise NotAForestError("a diagonal has two outgoing flips")
        heads[tails] = self.arcs[:, 1]
        return heads

    @cached_property
    def roots(self) -> np.ndarray:
        """Out-degree-zero vertices, one per component."""
        if self.arcs is None:
            raise ValueError("quadrilateral graph is not oriented")
        out = np.zeros(self.n_vertices, dtype=bool)
        out[self.arcs[:, 0]] = True
        return np.nonzero(~out)[0]

    def labeled_edges(self) -> set:
        """Edges as frozensets of two diagonals (labelled by point ids)."""
        d = self.diagonals.tolist()
        return {frozenset((tuple(d[u]), tuple(d[v]))) for u, v in self.edges.tolist()}

    def labeled_arcs(self) -> set:
        d = self.diagonals.tolist()
        return {(tuple(d[u]), tuple(d[v])) for u, v in self.arcs.tolist()}

    def to_json(self) -> dict:
        doc = {
            "vertices": self.diagonals.tolist(),
            "edges": self.edges.tolist(),
            "forest": self.is_forest(),
            "components": int(self.components[0]),
        }
        if self.arcs is not None:
            doc["arcs"] = self.arcs.tolist()
            doc["roots"] = self.roots.tolist()
        return doc

    def to_dot(self) -> str:
        directed = self.arcs is not None
        lines = ["digraph qg {" if directed else "graph qg {"]
        for i, j in self.diagonals.tolist():
            lines.append(f'  d_{i}_{j} [label="{i}-{j}"];')
        d = self.diagonals.tolist()
        pairs = self.arcs if directed else self.edges
        op = "->" if directed else "--"
        for u, v in pairs.tolist():
            lines.append(f"  d_{d[u][0]}_{d[u][1]} {op} d_{d[v][0]}_{d[v][1]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"QuadGraph(vertices={self.n_vertices}, edges={self.n_edges})"


def _pair_keys(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(a, b).astype(np.int64)
    hi = np.maximum(a, b).astype(np.int64)
    return lo * n + hi


def _orient_arcs(P: PointSet, quads: np.ndarray, d_qb: np.ndarray, d_ac: np.ndarray) -> np.ndarray:
    """Arcs for edges qb--ac given counterclockwise quads (q, a, b, c)."""
    frame = default_frame(P)
    coeffs = _kernels.incircle_coeffs(P.xs, P.ys, quads, swap=(frame.axis == "y"))
    s = frame.raw_signs(coeffs)
    if np.any(s == 0):
        raise DegenerateInputError("an empty quadrilateral stays cocircular in the frame")
    # s > 0: c is inside circle(q, a, b), so qb is the illegal diagonal
    return np.where((s > 0)[:, None], np.stack([d_qb, d_ac], 1), np.stack([d_ac, d_qb], 1))


def _sorted_edges(arcs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    edges = np.sort(arcs, axis=1)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return edges[order], arcs[order]


def build_qg_pentagon_free(P: PointSet, check: bool = True) -> QuadGraph:
    """Oriented quadrilateral forest of a pentagon-free set.

    Every clipped fan triangle (a, b, c) above apex q yields the empty
    quadrilateral q, a, b, c and hence the edge between diagonals qb and ac.
    Raises :class:`PentagonExistsError` with a witness if the sweep finds an
    empty pentagon, and :class:`NotAForestError` if the oriented result is
    not a forest with one sink per tree (only when ``check`` is set).
    """
    n = len(P)
    t = _tilt(P)
    quads, diags, hit = _kernels.scan_apexes(t.xs, t.ys, t.by_y, t.fast, True)
    if hit is not None:
        apex, pent = hit
        w = PentagonWitness(tuple(P[i] for i in (apex, *pent.tolist())))
        raise PentagonExistsError(f"empty pentagon {w.ids}", witness=w)
    keys = np.sort(_pair_keys(diags[:, 0], diags[:, 1], n))
    diagonals = np.stack([keys // n, keys % n], axis=1)
    quads = quads.astype(np.int64)
    q, a, b, c = quads.T
    d_qb = np.searchsorted(keys, _pair_keys(q, b, n))
    d_ac = np.searchsorted(keys, _pair_keys(a, c, n))
    if len(quads) and not P.all_collinear():
        arcs = _orient_arcs(P, quads, d_qb, d_ac)
    else:
        arcs = np.empty((0, 2), dtype=np.int64)
    edges, arcs = _sorted_edges(arcs)
    G = QuadGraph(P, diagonals, edges, arcs)
    if check:
        _check_forest(G)
    return G


def _check_forest(G: QuadGraph) -> None:
    if not G.is_forest():
        raise NotAForestError("quadrilateral graph has a cycle")
    G.heads  # raises on out-degree > 1
    ncomp, labels = G.components
    if len(np.unique(labels[G.roots])) != ncomp or len(G.roots) != ncomp:
        raise NotAForestError("a tree does not have exactly one sink")


def build_qg_general(P: PointSet, oriented: bool = True) -> QuadGraph:
    """Brute-force quadrilateral graph straight from the definitions.

    Scans all 4-subsets with :func:`is_empty_kgon`; use for small sets.
    """
    n = len(P)
    pts = P.points
    diagonals = np.array([(i, j) for i, j in combinations(range(n), 2)
                          if is_diagonal(P, pts[i], pts[j])], dtype=np.int64).reshape(-1, 2)
    index = {(int(i), int(j)): k for k, (i, j) in enumerate(diagonals.tolist())}
    frame = default_frame(P) if oriented and n >= 3 and not P.all_collinear() else None
    arcs = []
    for S in combinations(pts, 4):
        if not is_empty_kgon(P, S):
            continue
        h = convex_hull(S)            # counterclockwise quad p0 p1 p2 p3
        d02 = index[tuple(sorted((h[0].id, h[2].id)))]
        d13 = index[tuple(sorted((h[1].id, h[3].id)))]
        if frame is None:
            arcs.append((d02, d13))
            continue
        res = frame.in_circle(h[0].id, h[1].id, h[2].id, h[3].id)
        if res == InCircleResult.COCIRCULAR:
            raise DegenerateInputError("cocircular quadrilateral in the frame")
        # p3 inside circle(p0, p1, p2): diagonal p0p2 is illegal
        arcs.append((d02, d13) if res == InCircleResult.INSIDE else (d13, d02))
    arcs = np.array(arcs, dtype=np.int64).reshape(-1, 2)
    edges, arcs = _sorted_edges(arcs)
    return QuadGraph(P, diagonals, edges, arcs if frame is not None else None)


# ----------------------------------------------------- quadrilateral counts


def count_empty_quadrilaterals(P: PointSet) -> int:
    """Number of empty convex quadrilaterals of P."""
    tb = tables(P)
    o = tb.orient
    total = 0
    for d, (i, j) in enumerate(tb.diagonals):
        for lf, _ in tb.left[d]:
            for rt, _ in tb.right[d]:
                if int(o[lf, rt, i]) * int(o[lf, rt, j]) < 0:
                    total += 1
    # each quadrilateral is seen once from each of its two diagonals
    return total // 2


def has_empty_quadrilateral(P: PointSet) -> bool:
    return count_empty_quadrilaterals(P) > 0


def has_unique_triangulation(P: PointSet) -> bool:
    """True iff some (hence every) triangulation of P admits no flip."""
    return not flippable_edges(complete_to_triangulation(P))


def build_qg_tables(P: PointSet, oriented: bool = True) -> QuadGraph:
    """Quadrilateral graph of any set from the cached orientation tables.

    Same result as :func:`build_qg_general`, in time proportional to the
    number of (diagonal, empty triangle, empty triangle) triples.
    """
    tb = tables(P)
    o = tb.orient
    frame = default_frame(P) if oriented and not tb.collinear else None
    arcs = []
    for d, (i, j) in enumerate(tb.diagonals):
        for lf, _ in tb.left[d]:
            for rt, _ in tb.right[d]:
                if int(o[lf, rt, i]) * int(o[lf, rt, j]) >= 0:
                    continue
                e = tb.index[norm((lf, rt))]
                if e < d:
                    continue  # the quadrilateral was reached from its other diagonal
                if frame is None:
                    arcs.append((d, e))
                    continue
                res = frame.in_circle(i, j, lf, rt)
                if res == InCircleResult.COCIRCULAR:
                    raise DegenerateInputError("cocircular quadrilateral in the frame")
                arcs.append((d, e) if res == InCircleResult.INSIDE else (e, d))
    arcs = np.array(arcs, dtype=np.int64).reshape(-1, 2)
    diagonals = np.array(tb.diagonals, dtype=np.int64).reshape(-1, 2)
    edges, arcs = _sorted_edges(arcs)
    return QuadGraph(P, diagonals, edges, arcs if frame is not None else None)
