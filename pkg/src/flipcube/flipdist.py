"""Flip graphs, partial-cube labels and flip distances.

For a pentagon-free set every triangulation uses exactly one diagonal from
each tree of the quadrilateral forest, so a triangulation is a tuple of tree
vertices and flip distance is the sum of tree distances.  The functions here
compute that quantity, label triangulations with bit vectors whose Hamming
distance realises it, and provide brute-force flip-graph search to check it.
"""
from __future__ import annotations

import functools
import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from . import _kernels
from .errors import (BudgetExceededError, DisconnectedError, MismatchedPointSetsError,
                     NotADiagonalError, PentagonExistsError)
from .geom import PointSet
from .quadgraph import QuadGraph, build_qg_pentagon_free, build_qg_tables, find_empty_pentagon
from .triangulation import (Triangulation, any_triangulation, constrained_delaunay,
                            flips_to_delaunay, norm, tables)

DEFAULT_BUDGET = 200_000


# -------------------------------------------------------------- flip graph


def _mask_key(mask: int) -> tuple:
    # diagonal indices follow lexicographic order, so this orders by sorted edge list
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass(eq=False)
class FlipGraph:
    """Explicit flip graph.  Vertex ids follow (BFS layer, canonical key) order."""

    points: PointSet
    masks: list
    edges: np.ndarray
    layer_sizes: list
    odd_cycle: bool = False
    complete: bool = True
    index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {m: i for i, m in enumerate(self.masks)}

    def __len__(self):
        return len(self.masks)

    @property
    def n_vertices(self) -> int:
        return len(self.masks)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def triangulation(self, v: int) -> Triangulation:
        return Triangulation.from_mask(self.points, self.masks[v])

    @property
    def vertices(self) -> list:
        return [self.triangulation(v) for v in range(len(self.masks))]

    def vertex_of(self, T: Triangulation) -> int:
        return self.index[T.mask]

    @cached_property
    def adjacency(self) -> csr_matrix:
        return _csr(self.edges, len(self.masks))

    def is_bipartite(self) -> bool:
        return not self.odd_cycle

    def distances(self) -> np.ndarray:
        """All-pairs BFS distances (V x V, int32)."""
        A = self.adjacency
        return _kernels.bfs_all_pairs(A.indptr, A.indices)

    def distance(self, T1: Triangulation, T2: Triangulation) -> int:
        d = shortest_path(self.adjacency, unweighted=True, directed=False,
                          indices=self.vertex_of(T1))
        return int(d[self.vertex_of(T2)])

    def to_json(self) -> dict:
        return {"vertices": self.n_vertices, "edges": self.n_edges,
                "bipartite": self.is_bipartite()}

    def to_dot(self) -> str:
        import hashlib

        tb = tables(self.points)
        names = []
        lines = ["graph fg {"]
        for m in self.masks:
            key = " ".join(f"{i}-{j}" for i, j in tb.edges_of(m))
            name = "t_" + hashlib.sha256(key.encode()).hexdigest()[:8]
            names.append(name)
            lines.append(f'  {name} [label="{key}"];')
        for u, v in self.edges.tolist():
            lines.append(f"  {names[u]} -- {names[v]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def enumerate_flip_graph(P: PointSet, budget: int = DEFAULT_BUDGET,
                         stop_on_odd_cycle: bool = False) -> FlipGraph:
    """Breadth-first enumeration of every triangulation of P.

    Starts from the Delaunay triangulation (the unique chain for collinear
    input).  Raises :class:`BudgetExceededError` once more than ``budget``
    triangulations are found.  With ``stop_on_odd_cycle`` the search ends at
    the first edge inside a BFS layer and returns a partial graph whose
    ``complete`` flag is False.
    """
    tb = tables(P)
    start = any_triangulation(P).mask
    masks = [start]
    index = {start: 0}
    layer = [start]
    layer_sizes = [1]
    edges = []
    odd = False
    while layer:
        found = {}
        links = []
        for m in layer:
            u = index[m]
            for d, t in tb.flips(m):
                m2 = m ^ (1 << d) ^ (1 << t)
                v = index.get(m2)
                if v is None:
                    found.setdefault(m2, None)
                    links.append((u, m2))
                elif v > u:
                    edges.append((u, v))
                    odd = True  # both ends in the current layer
        if odd and stop_on_odd_cycle:
            return FlipGraph(P, masks, np.array(edges, dtype=np.int64).reshape(-1, 2),
                             layer_sizes, odd_cycle=True, complete=False)
        new = sorted(found, key=_mask_key)
        if len(masks) + len(new) > budget:
            raise BudgetExceededError(f"more than {budget} triangulations")
        for m2 in new:
            index[m2] = len(masks)
            masks.append(m2)
        for u, m2 in links:
            edges.append((u, index[m2]))
        layer = new
        if new:
            layer_sizes.append(len(new))
    E = np.array(sorted(set(edges)), dtype=np.int64).reshape(-1, 2)
    return FlipGraph(P, masks, E, layer_sizes, odd_cycle=odd)


@functools.lru_cache(maxsize=16)
def _flip_graph_cached(P: PointSet, budget: int) -> FlipGraph:
    return enumerate_flip_graph(P, budget)


# ------------------------------------------------------------ partial cubes


def _csr(edges: np.ndarray, V: int) -> csr_matrix:
    u, v = edges[:, 0], edges[:, 1]
    data = np.ones(2 * len(u), dtype=np.int8)
    return csr_matrix((data, (np.concatenate([u, v]), np.concatenate([v, u]))), shape=(V, V))


def theta_classes(edges: np.ndarray, V: int):
    """Djoković–Winkler classes of a connected bipartite graph.

    Each class is the set of edges crossing the cut {w : d(w, v) < d(w, u)}
    of some edge uv.  Returns (edge -> class id array, per-class side masks),
    or None when two cuts share an edge, which rules out a cube embedding.
    """
    A = _csr(edges, V)
    indptr, indices = A.indptr.astype(np.int64), A.indices.astype(np.int64)
    cls = np.full(len(edges), -1, dtype=np.int64)
    sides = []
    for e in range(len(edges)):
        if cls[e] >= 0:
            continue
        u, v = edges[e]
        du, dv = _kernels.bfs_from(indptr, indices, np.array([u, v], dtype=np.int64))
        near_v = dv < du
        crossing = near_v[edges[:, 0]] != near_v[edges[:, 1]]
        if np.any(cls[crossing] >= 0):
            return None
        cls[crossing] = len(sides)
        sides.append(near_v)
    return cls, sides


def is_partial_cube(G) -> bool:
    """Whether a graph embeds isometrically in a hypercube.

    ``G`` is a :class:`FlipGraph` or anything with ``edges`` ((E, 2) array)
    and ``n_vertices``.  Checks bipartiteness, builds the Djoković–Winkler
    cuts and verifies that the resulting bit labels have Hamming distance
    equal to graph distance for every pair of vertices.
    """
    V = G.n_vertices
    if V <= 1:
        return True
    edges = np.asarray(G.edges, dtype=np.int64).reshape(-1, 2)
    A = _csr(edges, V)
    ncomp, _ = connected_components(A, directed=False)
    if ncomp != 1:
        raise DisconnectedError(f"graph has {ncomp} components")
    if getattr(G, "odd_cycle", False):
        return False
    d = _kernels.bfs_from(A.indptr.astype(np.int64), A.indices.astype(np.int64),
                          np.array([0], dtype=np.int64))[0]
    if np.any((d[edges[:, 0]] - d[edges[:, 1]]) % 2 == 0):
        return False
    res = theta_classes(edges, V)
    if res is None:
        return False
    words = _pack(res[1], V)
    return _kernels.hamming_isometric(A.indptr, A.indices, words)


class SimpleGraph(NamedTuple):
    n_vertices: int
    edges: np.ndarray


def _pack(sides, V) -> np.ndarray:
    nw = max(1, (len(sides) + 63) // 64)
    words = np.zeros((V, nw), dtype=np.uint64)
    for c, side in enumerate(sides):
        words[side, c // 64] |= np.uint64(1 << (c % 64))
    return words


def flip_graph_is_partial_cube(P: PointSet, budget: int = DEFAULT_BUDGET) -> bool:
    """Partial-cube test on the flip graph of P, stopping early at an odd cycle."""
    G = enumerate_flip_graph(P, budget, stop_on_odd_cycle=True)
    if G.odd_cycle:
        return False
    return is_partial_cube(G)


# --------------------------------------------------------------- cube labels


class CubeLabel(NamedTuple):
    bits: int
    length: int

    def hamming(self, other: "CubeLabel") -> int:
        return (self.bits ^ other.bits).bit_count()

    def __str__(self):
        return format(self.bits, f"0{self.length}b")[::-1] if self.length else ""


class CubeLabeler:
    """Bit labels for the triangulations of a pentagon-free set.

    Bit positions correspond to quadrilateral-forest edges, grouped by tree
    (trees ordered by smallest vertex id).  A triangulation's label has the
    bits of the path from its diagonal in each tree down to the tree's root.
    """

    def __init__(self, P: PointSet, qg: QuadGraph | None = None):
        self.points = P
        self.qg = qg if qg is not None else _forest(P)
        heads = self.qg.heads
        _, comp = self.qg.components
        tails = np.nonzero(heads >= 0)[0]
        order = tails[np.lexsort((tails, comp[tails]))]
        self.bit_of = {int(v): b for b, v in enumerate(order.tolist())}
        self.length = len(order)
        self._heads = heads.tolist()
        self._path = {}

    def path_bits(self, v: int) -> int:
        """Bits of the forest path from vertex v to its root."""
        chain = []
        while v not in self._path and self._heads[v] >= 0:
            chain.append(v)
            v = self._heads[v]
        acc = self._path.get(v, 0)
        for w in reversed(chain):
            acc |= 1 << self.bit_of[w]
            self._path[w] = acc
        return acc

    def __call__(self, T: Triangulation) -> CubeLabel:
        if T.points != self.points:
            raise MismatchedPointSetsError("triangulation is over a different point set")
        bits = 0
        for e in T.edges:
            bits |= self.path_bits(self.qg.vertex(e))
        return CubeLabel(bits, self.length)


@functools.lru_cache(maxsize=64)
def cube_labels(P: PointSet) -> CubeLabeler:
    """Labeler mapping triangulations of pentagon-free P to cube labels."""
    return CubeLabeler(P)


# -------------------------------------------------------- exact distances


@functools.lru_cache(maxsize=256)
def _forest(P: PointSet) -> QuadGraph:
    return build_qg_pentagon_free(P)


@functools.lru_cache(maxsize=256)
def _pentagon_free(P: PointSet) -> bool:
    return find_empty_pentagon(P) is None


def _require_pentagon_free(P: PointSet) -> None:
    if not _pentagon_free(P):
        w = find_empty_pentagon(P)
        raise PentagonExistsError(f"empty pentagon {w.ids}", witness=w)


@functools.lru_cache(maxsize=16384)
def _delaunay_path(T: Triangulation) -> frozenset:
    return frozenset(flips_to_delaunay(T))


def _same_points(T1: Triangulation, T2: Triangulation) -> PointSet:
    if T1.points != T2.points:
        raise MismatchedPointSetsError("triangulations are over different point sets")
    return T1.points


def flip_distance_pentagon_free(T1: Triangulation, T2: Triangulation) -> int:
    """Exact flip distance for a pentagon-free set.

    Flip both triangulations to Delaunay and count the flips used by exactly
    one of the two sequences.
    """
    P = _same_points(T1, T2)
    _require_pentagon_free(P)
    return len(_delaunay_path(T1) ^ _delaunay_path(T2))


class FlipNumber(NamedTuple):
    diagonal: tuple
    value: int


def flip_number(P: PointSet, d, method: str = "auto", budget: int = DEFAULT_BUDGET) -> FlipNumber:
    """Fewest flips from the Delaunay triangulation to one containing d.

    ``method`` is "tree" (needs a pentagon-free set), "oracle" (flip-graph
    search) or "auto".  For pentagon-free sets the triangulations containing
    d form a convex set of the flip graph, so the nearest one to Delaunay is
    unique; Lawson flipping with d held fixed reaches it, and its cube label
    weight is the answer.  This is at least the depth of d in its tree and
    can exceed it when d crosses Delaunay edges of other trees.
    """
    d = norm(d)
    tb = tables(P)
    if d not in tb.index:
        raise NotADiagonalError(f"{d} is not a diagonal")
    if method == "auto":
        method = "tree" if _pentagon_free(P) else "oracle"
    if method == "tree":
        _require_pentagon_free(P)
        if len(P) < 3 or P.all_collinear():
            return FlipNumber(d, 0)
        T = constrained_delaunay(P, [d])
        return FlipNumber(d, cube_labels(P)(T).bits.bit_count())
    G = _flip_graph_cached(P, budget)
    dist = shortest_path(G.adjacency, unweighted=True, directed=False, indices=0)
    bit = 1 << tb.index[d]
    best = min(int(dist[v]) for v, m in enumerate(G.masks) if m & bit)
    return FlipNumber(d, best)


def flip_distance_exact_oracle(T1: Triangulation, T2: Triangulation,
                               budget: int = DEFAULT_BUDGET) -> int:
    """Breadth-first search distance in the flip graph."""
    P = _same_points(T1, T2)
    tb = tables(P)
    src, dst = T1.mask, T2.mask
    if src == dst:
        return 0
    seen = {src}
    frontier = [src]
    dist = 0
    while frontier:
        dist += 1
        nxt = []
        for m in frontier:
            for d, t in tb.flips(m):
                m2 = m ^ (1 << d) ^ (1 << t)
                if m2 == dst:
                    return dist
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        if len(seen) > budget:
            raise BudgetExceededError(f"more than {budget} triangulations visited")
        frontier = nxt
    raise DisconnectedError("target triangulation not reachable")


# ---------------------------------------------------------- matching bound


def quad_graph(P: PointSet) -> QuadGraph:
    """Fast forest for pentagon-free sets, table-driven scan otherwise."""
    if _pentagon_free(P):
        return _forest(P)
    return _general(P)


@functools.lru_cache(maxsize=64)
def _general(P: PointSet) -> QuadGraph:
    return build_qg_tables(P, oriented=False)


class MatchingBound:
    """Minimum-weight perfect matching of two triangulations' diagonals.

    Weights are unweighted distances in the quadrilateral graph.  Holds the
    all-pairs distance matrix so repeated queries on one set are cheap.
    """

    def __init__(self, qg: QuadGraph):
        self.qg = qg
        V = qg.n_vertices
        d = shortest_path(qg.adjacency, unweighted=True, directed=False)
        self.sentinel = 3 * len(qg.points) * V + 1
        d[np.isinf(d)] = self.sentinel
        self.dist = d.astype(np.int64)

    def __call__(self, T1: Triangulation, T2: Triangulation) -> int:
        a = [self.qg.vertex(e) for e in sorted(T1.edges)]
        b = [self.qg.vertex(e) for e in sorted(T2.edges)]
        return self.cost(a, b)

    def cost(self, a, b) -> int:
        W = self.dist[np.ix_(a, b)]
        r, c = linear_sum_assignment(W)
        picked = W[r, c]
        if np.any(picked >= self.sentinel):
            raise AssertionError("matching paired diagonals from different components")
        return int(picked.sum())


@functools.lru_cache(maxsize=64)
def _matcher(qg: QuadGraph) -> MatchingBound:
    return MatchingBound(qg)


def matching_lower_bound(T1: Triangulation, T2: Triangulation, QG: QuadGraph | None = None) -> int:
    """Lower bound on flip distance from an optimal diagonal matching."""
    P = _same_points(T1, T2)
    if QG is None:
        QG = quad_graph(P)
    elif QG.points != P:
        raise MismatchedPointSetsError("quadrilateral graph is over a different point set")
    return _matcher(QG)(T1, T2)


def astar_flip_distance(T1: Triangulation, T2: Triangulation, QG: QuadGraph | None = None,
                        budget: int = DEFAULT_BUDGET) -> int:
    """Exact flip distance by A* search with the matching bound as heuristic.

    The bound changes by at most one per flip, so it is consistent and the
    first time the target is popped its distance is final.
    """
    P = _same_points(T1, T2)
    QG = QG if QG is not None else quad_graph(P)
    match = _matcher(QG)
    tb = tables(P)
    goal = T2.mask
    target = [QG.vertex(e) for e in sorted(T2.edges)]
    vid = [QG.vertex(e) for e in tb.diagonals]

    def h(mask):
        return match.cost([vid[d] for d in _mask_key(mask)], target)

    start = T1.mask
    g = {start: 0}
    heap = [(h(start), 0, start)]
    closed = set()
    while heap:
        f, gm, m = heapq.heappop(heap)
        if m == goal:
            return gm
        if m in closed:
            continue
        closed.add(m)
        if len(closed) > budget:
            raise BudgetExceededError(f"more than {budget} triangulations expanded")
        for d, t in tb.flips(m):
            m2 = m ^ (1 << d) ^ (1 << t)
            if m2 in closed:
                continue
            g2 = gm + 1
            if g2 < g.get(m2, 1 << 60):
                g[m2] = g2
                heapq.heappush(heap, (g2 + h(m2), g2, m2))
    raise DisconnectedError("target triangulation not reachable")
