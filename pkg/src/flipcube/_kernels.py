"""Hot loops.

Each kernel has a numba path and a numpy (or plain-Python-over-arrays) path;
the dispatch functions at the bottom pick one from ``_accel.USE_NUMBA`` and the
coordinate magnitude.  Coordinates that do not fit the int64 safety bounds are
carried as ``object`` arrays of Python ints and always take the slow path, so
results stay exact.
"""
import numpy as np

from . import _accel
from ._accel import jit, py

# ---------------------------------------------------------------- primitives


@jit
def _orient(xs, ys, a, b, c):
    d = (xs[b] - xs[a]) * (ys[c] - ys[a]) - (ys[b] - ys[a]) * (xs[c] - xs[a])
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


@jit
def _convex4(xs, ys, p0, p1, p2, p3):
    return (_orient(xs, ys, p0, p1, p2) > 0 and _orient(xs, ys, p1, p2, p3) > 0
            and _orient(xs, ys, p2, p3, p0) > 0 and _orient(xs, ys, p3, p0, p1) > 0)


# ------------------------------------------------------- orientation tables


@jit
def _orient_tensor_nb(xs, ys, out):
    n = xs.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[i, j, k] = _orient(xs, ys, i, j, k)


def _orient_tensor_np(xs, ys):
    n = len(xs)
    out = np.empty((n, n, n), dtype=np.int8)
    dx = xs[None, :] - xs[:, None]
    dy = ys[None, :] - ys[:, None]
    for i in range(n):
        det = dx[i][:, None] * dy[i][None, :] - dy[i][:, None] * dx[i][None, :]
        out[i] = (det > 0).astype(np.int8) - (det < 0).astype(np.int8)
    return out


@jit
def _empty_triangles_nb(orient, out):
    n = orient.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = orient[i, j, k]
                if s == 0:
                    continue
                empty = True
                for p in range(n):
                    if p == i or p == j or p == k:
                        continue
                    if (s * orient[i, j, p] >= 0 and s * orient[j, k, p] >= 0
                            and s * orient[k, i, p] >= 0):
                        empty = False
                        break
                if empty:
                    out[i, j, k] = out[i, k, j] = out[j, i, k] = True
                    out[j, k, i] = out[k, i, j] = out[k, j, i] = True


def _empty_triangles_np(orient, chunk=100_000):
    n = orient.shape[0]
    out = np.zeros((n, n, n), dtype=bool)
    tri = np.array([(i, j, k) for i in range(n) for j in range(i + 1, n)
                    for k in range(j + 1, n)], dtype=np.intp).reshape(-1, 3)
    pid = np.arange(n)
    for lo in range(0, len(tri), chunk):
        I, J, K = tri[lo:lo + chunk].T
        s = orient[I, J, K].astype(np.int16)[:, None]
        inside = ((s * orient[I, J, :] >= 0) & (s * orient[J, K, :] >= 0)
                  & (s * orient[K, I, :] >= 0))
        inside &= (pid[None, :] != I[:, None]) & (pid[None, :] != J[:, None])
        inside &= pid[None, :] != K[:, None]
        ok = (s[:, 0] != 0) & ~inside.any(axis=1)
        I, J, K = I[ok], J[ok], K[ok]
        for a, b, c in ((I, J, K), (I, K, J), (J, I, K), (J, K, I), (K, I, J), (K, J, I)):
            out[a, b, c] = True
    return out


@jit
def _diagonal_matrix_nb(xs, ys, orient, out):
    n = xs.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            ok = True
            for p in range(n):
                if p == i or p == j or orient[i, j, p] != 0:
                    continue
                if (xs[p] - xs[i]) * (xs[p] - xs[j]) + (ys[p] - ys[i]) * (ys[p] - ys[j]) < 0:
                    ok = False
                    break
            out[i, j] = out[j, i] = ok


def _diagonal_matrix_np(xs, ys, orient):
    n = len(xs)
    dx = xs[None, :] - xs[:, None]   # dx[j, p] = x_p - x_j
    dy = ys[None, :] - ys[:, None]
    out = np.zeros((n, n), dtype=bool)
    for i in range(n):
        # p strictly inside segment i-j  <=>  collinear and (p-i).(p-j) < 0
        inner = dx[i][None, :] * dx + dy[i][None, :] * dy
        blocked = (orient[i] == 0) & (inner < 0)
        out[i] = ~blocked.any(axis=1)
    np.fill_diagonal(out, False)
    return out


# ---------------------------------------------------- radial sort and fans


@jit
def _before(xs, ys, q, a, b):
    o = _orient(xs, ys, q, a, b)
    if o != 0:
        return o > 0
    # same ray from q (both strictly above q): nearer first
    return ys[a] < ys[b]


@jit
def _radial_sort(xs, ys, q, idx, m, tmp):
    """Bottom-up merge sort of idx[:m] counterclockwise around q."""
    width = 1
    src = idx
    dst = tmp
    swapped = False
    while width < m:
        lo = 0
        while lo < m:
            mid = min(lo + width, m)
            hi = min(lo + 2 * width, m)
            i = lo
            j = mid
            k = lo
            while i < mid and j < hi:
                if _before(xs, ys, q, src[j], src[i]):
                    dst[k] = src[j]
                    j += 1
                else:
                    dst[k] = src[i]
                    i += 1
                k += 1
            while i < mid:
                dst[k] = src[i]
                i += 1
                k += 1
            while j < hi:
                dst[k] = src[j]
                j += 1
                k += 1
            lo += 2 * width
        src, dst = dst, src
        swapped = not swapped
        width *= 2
    if swapped:
        for t in range(m):
            idx[t] = src[t]


@jit
def _fan(xs, ys, q, order, m, chain, stack, child, ears, pent):
    """Partition the radial fan around q by clipping convex chain vertices.

    ``order[:m]`` is the radial order of the points above q.  Writes the
    nearest point of each ray to ``chain`` and every clipped triangle to
    ``ears`` (chain order).  Returns (chain length, ear count, found); when
    two adjacent clipped triangles make a strictly convex quadrilateral,
    ``found`` is 1 and its corners are in ``pent[:4]`` (chain order).
    """
    s = 0
    n_chain = 0
    n_ears = 0
    last = -1
    for t in range(m):
        c = order[t]
        if last >= 0 and _orient(xs, ys, q, last, c) == 0:
            continue
        last = c
        chain[n_chain] = c
        n_chain += 1
        pending = -1
        while s >= 2:
            a = stack[s - 2]
            b = stack[s - 1]
            if _orient(xs, ys, a, b, c) <= 0:
                break
            ca = child[s - 1]
            if ca >= 0 and _convex4(xs, ys, a, ca, b, c):
                pent[0] = a
                pent[1] = ca
                pent[2] = b
                pent[3] = c
                return n_chain, n_ears, 1
            if pending >= 0 and _convex4(xs, ys, a, b, pending, c):
                pent[0] = a
                pent[1] = b
                pent[2] = pending
                pent[3] = c
                return n_chain, n_ears, 1
            ears[n_ears, 0] = a
            ears[n_ears, 1] = b
            ears[n_ears, 2] = c
            n_ears += 1
            pending = b
            s -= 1
        stack[s] = c
        child[s] = pending
        s += 1
    return n_chain, n_ears, 0


@jit
def _scan_apexes(xs, ys, by_y, emit, quads_out, diags_out, pent):
    """Run the fan partition at every apex, lowest first.

    With ``emit`` set, every clipped triangle (a, b, c) at apex q is written
    to ``quads_out`` as (q, a, b, c) and every apex-to-ray diagonal to
    ``diags_out``.  Stops at the first convex pair; returns
    (quad count, diagonal count, apex or -1).
    """
    n = by_y.shape[0]
    idx = np.empty(n, dtype=np.int64)
    tmp = np.empty(n, dtype=np.int64)
    chain = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    child = np.empty(n, dtype=np.int64)
    ears = np.empty((n, 3), dtype=np.int64)
    n_quads = 0
    n_diags = 0
    for r in range(n):
        q = by_y[r]
        m = n - r - 1
        for t in range(m):
            idx[t] = by_y[r + 1 + t]
        _radial_sort(xs, ys, q, idx, m, tmp)
        n_chain, n_ears, found = _fan(xs, ys, q, idx, m, chain, stack, child, ears, pent)
        if found:
            return n_quads, n_diags, q
        if emit:
            for t in range(n_ears):
                quads_out[n_quads, 0] = q
                quads_out[n_quads, 1] = ears[t, 0]
                quads_out[n_quads, 2] = ears[t, 1]
                quads_out[n_quads, 3] = ears[t, 2]
                n_quads += 1
            for t in range(n_chain):
                diags_out[n_diags, 0] = q
                diags_out[n_diags, 1] = chain[t]
                n_diags += 1
    return n_quads, n_diags, -1


# ------------------------------------------------ in-circle coefficients


@jit
def _incircle_coeffs_nb(xs, ys, quads, swap, out):
    """Coefficients of the raw in-circle determinant under a shear.

    For the map x -> x + t*y (``swap`` False; y -> y + t*x when True) the
    determinant of (a, b, c, d) is out[0] + t*out[1] + t*t*out[2].
    """
    sign = -1 if swap else 1
    for r in range(quads.shape[0]):
        d = quads[r, 3]
        a = quads[r, 0]
        b = quads[r, 1]
        c = quads[r, 2]
        u0 = xs[a] - xs[d]
        v0 = ys[a] - ys[d]
        u1 = xs[b] - xs[d]
        v1 = ys[b] - ys[d]
        u2 = xs[c] - xs[d]
        v2 = ys[c] - ys[d]
        if swap:
            u0, v0 = v0, u0
            u1, v1 = v1, u1
            u2, v2 = v2, u2
        c0 = u1 * v2 - v1 * u2
        c1 = v0 * u2 - u0 * v2
        c2 = u0 * v1 - v0 * u1
        out[r, 0] = sign * ((u0 * u0 + v0 * v0) * c0 + (u1 * u1 + v1 * v1) * c1
                            + (u2 * u2 + v2 * v2) * c2)
        out[r, 1] = sign * (2 * u0 * v0 * c0 + 2 * u1 * v1 * c1 + 2 * u2 * v2 * c2)
        out[r, 2] = sign * (v0 * v0 * c0 + v1 * v1 * c1 + v2 * v2 * c2)


def _incircle_coeffs_np(xs, ys, quads, swap):
    a, b, c, d = (quads[:, i] for i in range(4))
    rows = []
    for p in (a, b, c):
        u = xs[p] - xs[d]
        v = ys[p] - ys[d]
        if swap:
            u, v = v, u
        rows.append((u, v, u * u + v * v, 2 * u * v, v * v))
    (u0, v0, l0, x0, y0), (u1, v1, l1, x1, y1), (u2, v2, l2, x2, y2) = rows
    c0 = u1 * v2 - v1 * u2
    c1 = v0 * u2 - u0 * v2
    c2 = u0 * v1 - v0 * u1
    sign = -1 if swap else 1
    out = np.empty((len(quads), 3), dtype=np.asarray(xs).dtype)
    out[:, 0] = sign * (l0 * c0 + l1 * c1 + l2 * c2)
    out[:, 1] = sign * (x0 * c0 + x1 * c1 + x2 * c2)
    out[:, 2] = sign * (y0 * c0 + y1 * c1 + y2 * c2)
    return out


# ----------------------------------------------------------- graph kernels


@jit
def _bfs_from_nb(indptr, indices, sources, out):
    n = indptr.shape[0] - 1
    queue = np.empty(n, dtype=np.int64)
    for r in range(sources.shape[0]):
        row = out[r]
        for v in range(n):
            row[v] = -1
        s = sources[r]
        row[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if row[w] < 0:
                    row[w] = row[u] + 1
                    queue[tail] = w
                    tail += 1


def _bfs_from_np(indptr, indices, sources):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import shortest_path

    n = len(indptr) - 1
    adj = csr_matrix((np.ones(len(indices)), indices, indptr), shape=(n, n))
    dist = shortest_path(adj, unweighted=True, directed=False, indices=sources)
    dist = np.atleast_2d(dist)
    dist[np.isinf(dist)] = -1
    return dist.astype(np.int32)


@jit
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    x = x + (x >> np.uint64(8))
    x = x + (x >> np.uint64(16))
    x = x + (x >> np.uint64(32))
    return x & np.uint64(0x7F)


@jit
def _hamming_isometric_nb(indptr, indices, words):
    """BFS from every vertex; compare each distance with the label Hamming distance."""
    n, w = words.shape
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        for v in range(n):
            dist[v] = -1
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                x = indices[e]
                if dist[x] < 0:
                    dist[x] = dist[u] + 1
                    queue[tail] = x
                    tail += 1
        for v in range(n):
            h = 0
            for t in range(w):
                h += _popcount64(words[s, t] ^ words[v, t])
            if h != dist[v]:
                return False
    return True


def _hamming_isometric_np(indptr, indices, words, chunk=256):
    n = len(words)
    for lo in range(0, n, chunk):
        src = np.arange(lo, min(lo + chunk, n))
        dist = _bfs_from_np(indptr, indices, src)
        for r, s in enumerate(src):
            h = np.bitwise_count(words[s][None, :] ^ words).sum(axis=1)
            if not np.array_equal(h, dist[r]):
                return False
    return True


# ---------------------------------------------------------------- dispatch


def _span(xs, ys):
    if len(xs) == 0:
        return 0
    return max(max(xs) - min(xs), max(ys) - min(ys))


def coord_arrays(xs, ys, bound=_accel.ORIENT_SAFE):
    """int64 arrays when the span is safe for ``bound``, else object arrays."""
    xs = [int(v) for v in xs]
    ys = [int(v) for v in ys]
    lo = min(xs + ys) if xs else 0
    hi = max(xs + ys) if xs else 0
    if _span(xs, ys) < bound and -(1 << 62) < lo and hi < (1 << 62):
        # translate so intermediate products stay bounded by the span
        ox, oy = min(xs), min(ys)
        return (np.array([v - ox for v in xs], dtype=np.int64),
                np.array([v - oy for v in ys], dtype=np.int64), True)
    return np.array(xs, dtype=object), np.array(ys, dtype=object), False


def orientation_tensor(xs, ys):
    xs, ys, fast = coord_arrays(xs, ys)
    if fast and _accel.USE_NUMBA:
        out = np.empty((len(xs),) * 3, dtype=np.int8)
        _orient_tensor_nb(xs, ys, out)
        return out
    return _orient_tensor_np(xs, ys)


def empty_triangles(orient):
    if _accel.USE_NUMBA:
        out = np.zeros(orient.shape, dtype=bool)
        _empty_triangles_nb(orient, out)
        return out
    return _empty_triangles_np(orient)


def diagonal_matrix(xs, ys, orient):
    xs, ys, fast = coord_arrays(xs, ys)
    if fast and _accel.USE_NUMBA:
        out = np.zeros((len(xs), len(xs)), dtype=bool)
        _diagonal_matrix_nb(xs, ys, orient, out)
        return out
    return _diagonal_matrix_np(xs, ys, orient)


def radial_sort(xs, ys, q, idx, fast):
    idx = np.asarray(idx, dtype=np.int64).copy()
    tmp = np.empty_like(idx)
    f = _radial_sort if (fast and _accel.USE_NUMBA) else py(_radial_sort)
    f(xs, ys, q, idx, len(idx), tmp)
    return idx


def fan(xs, ys, q, order, fast):
    m = len(order)
    order = np.asarray(order, dtype=np.int64)
    bufs = [np.empty(max(m, 1), dtype=np.int64) for _ in range(3)]
    ears = np.empty((max(m, 1), 3), dtype=np.int64)
    pent = np.full(4, -1, dtype=np.int64)
    f = _fan if (fast and _accel.USE_NUMBA) else py(_fan)
    n_chain, n_ears, found = f(xs, ys, q, order, m, bufs[0], bufs[1], bufs[2], ears, pent)
    return bufs[0][:n_chain].copy(), ears[:n_ears].copy(), (pent.copy() if found else None)


def scan_apexes(xs, ys, by_y, fast, emit):
    n = len(by_y)
    cap = n * (n - 1) // 2 if emit else 1
    quads = np.empty((max(cap, 1), 4), dtype=np.int64 if n >= 1 << 31 else np.int32)
    diags = np.empty((max(cap, 1), 2), dtype=quads.dtype)
    pent = np.full(4, -1, dtype=np.int64)
    f = _scan_apexes if (fast and _accel.USE_NUMBA) else py(_scan_apexes)
    nq, nd, apex = f(xs, ys, np.asarray(by_y, dtype=np.int64), emit, quads, diags, pent)
    return quads[:nq], diags[:nd], (int(apex), pent) if apex >= 0 else None


def incircle_coeffs(xs, ys, quads, swap=False):
    """(m, 3) coefficients, int64 when exact in int64 else object."""
    quads = np.asarray(quads, dtype=np.int64).reshape(-1, 4)
    xs_a, ys_a, fast = coord_arrays(xs, ys, bound=_accel.INCIRCLE_SAFE)
    if fast and _accel.USE_NUMBA:
        out = np.empty((len(quads), 3), dtype=np.int64)
        _incircle_coeffs_nb(xs_a, ys_a, quads, swap, out)
        return out
    return _incircle_coeffs_np(xs_a, ys_a, quads, swap)


def bfs_from(indptr, indices, sources):
    """BFS distances from each source (rows), -1 where unreachable."""
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    sources = np.asarray(sources, dtype=np.int64)
    if _accel.USE_NUMBA:
        out = np.empty((len(sources), len(indptr) - 1), dtype=np.int32)
        _bfs_from_nb(indptr, indices, sources, out)
        return out
    return _bfs_from_np(indptr, indices, sources)


def hamming_isometric(indptr, indices, words):
    """Hamming distance of the label rows equals graph distance for all pairs."""
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    words = np.ascontiguousarray(words, dtype=np.uint64)
    if _accel.USE_NUMBA:
        return bool(_hamming_isometric_nb(indptr, indices, words))
    return bool(_hamming_isometric_np(indptr, indices, words))


def bfs_all_pairs(indptr, indices):
    return bfs_from(indptr, indices, np.arange(len(indptr) - 1))
