"""Slow reference implementations used only by the tests.

Nothing here imports the package's tables, kernels or flip machinery; the
oracles are built from exact rational arithmetic and exhaustive search.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations


def orient(a, b, c) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def circumcircle(a, b, c):
    """Exact centre and squared radius of the circle through a, b, c."""
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0:
        raise ValueError("collinear")
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    return (ux, uy), (ax - ux) ** 2 + (ay - uy) ** 2


def circle_side(a, b, c, d) -> int:
    """+1 inside, 0 on, -1 outside the circle through a, b, c."""
    (ux, uy), r2 = circumcircle(a, b, c)
    dist = (d[0] - ux) ** 2 + (d[1] - uy) ** 2
    return (dist < r2) - (dist > r2)


def strictly_between(p, a, b) -> bool:
    if orient(a, b, p) != 0:
        return False
    return (p[0] - a[0]) * (p[0] - b[0]) + (p[1] - a[1]) * (p[1] - b[1]) < 0


def crosses(a, b, c, d) -> bool:
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0


def diagonals(pts) -> list:
    n = len(pts)
    return [(i, j) for i, j in combinations(range(n), 2)
            if not any(strictly_between(pts[k], pts[i], pts[j]) for k in range(n) if k not in (i, j))]


def triangulations(pts) -> list[frozenset]:
    """Every maximal non-crossing set of diagonals, by backtracking."""
    diags = diagonals(pts)
    cross = {d: {e for e in diags if crosses(pts[d[0]], pts[d[1]], pts[e[0]], pts[e[1]])}
             for d in diags}
    pos = {d: k for k, d in enumerate(diags)}
    out = []

    def rec(k, chosen, blocked):
        if k == len(diags):
            # maximal iff every skipped diagonal is blocked
            if all(d in chosen or d in blocked for d in diags):
                out.append(frozenset(chosen))
            return
        d = diags[k]
        if d in blocked:
            rec(k + 1, chosen, blocked)
            return
        chosen.append(d)
        rec(k + 1, chosen, blocked | cross[d])
        chosen.pop()
        # skipping d only makes sense if a later diagonal could still block it
        if any(pos[e] > k for e in cross[d]):
            rec(k + 1, chosen, blocked)

    rec(0, [], frozenset())
    return out


def flip_graph(pts):
    """(list of triangulations, adjacency lists): adjacent iff they differ in one edge."""
    tris = triangulations(pts)
    index = {t: i for i, t in enumerate(tris)}
    adj = [[] for _ in tris]
    for i, t in enumerate(tris):
        for e in t:
            rest = t - {e}
            for j, u in enumerate(tris):
                if j != i and len(u - rest) == 1 and rest <= u:
                    adj[i].append(j)
    return tris, adj, index


def bfs(adj, s) -> list[int]:
    dist = [-1] * len(adj)
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def catalan(n: int) -> int:
    """Catalan numbers by the convolution recurrence."""
    c = [1]
    for m in range(1, n + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[n]


def delaunay_edges(pts) -> set:
    """Edges of triangles whose closed circumdisk holds no other point.

    Valid when no four non-collinear points are cocircular.
    """
    n = len(pts)
    edges = set()
    for i, j, k in combinations(range(n), 3):
        if orient(pts[i], pts[j], pts[k]) == 0:
            continue
        if all(circle_side(pts[i], pts[j], pts[k], pts[m]) < 0
               for m in range(n) if m not in (i, j, k)):
            edges |= {(i, j), (i, k), (j, k)}
    return edges


def in_convex_hull_closed(p, hull) -> bool:
    k = len(hull)
    return all(orient(hull[i], hull[(i + 1) % k], p) >= 0 for i in range(k))


def hull_ccw(S):
    pts = sorted(set(S))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    return half(pts)[:-1] + half(pts[::-1])[:-1]


def empty_kgons(pts, k) -> list:
    out = []
    for S in combinations(range(len(pts)), k):
        sub = [pts[i] for i in S]
        h = hull_ccw(sub)
        if len(h) != k:
            continue
        if any(in_convex_hull_closed(pts[m], h) for m in range(len(pts)) if m not in S):
            continue
        out.append(S)
    return out


def slope_order(q, above) -> list:
    """Points above q ordered by the angle of q->p, via exact cotangents.

    cot(angle) = dx/dy decreases as the angle grows, so sort by -dx/dy,
    breaking ties by distance.
    """
    return sorted(above, key=lambda p: (-Fraction(p[0] - q[0], p[1] - q[1]), p[1] - q[1]))
