# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: label-setting shortest paths and the exhaustive
triangle-inequality scan. Results are bit-identical to the pure backend."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline bint _heap_less(double da, long na, double db, long nb) nogil:
    # (dist, state-id) lexicographic: deterministic pop order.
    if da != db:
        return da < db
    return na < nb


def dijkstra_csr(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                 cnp.float64_t[::1] weights, long source, long n):
    """Single-source shortest paths on nonnegative weights.

    Returns (dist: float64[n], reached: uint8[n]); dist meaningful only
    where reached.
    """
    dist_arr = np.zeros(n, dtype=np.float64)
    reached_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.float64_t[::1] dist = dist_arr
    cdef cnp.uint8_t[::1] reached = reached_arr

    best_arr = np.zeros(n, dtype=np.float64)
    inq_arr = np.zeros(n, dtype=np.uint8)
    done_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.float64_t[::1] best = best_arr
    cdef cnp.uint8_t[::1] inq = inq_arr
    cdef cnp.uint8_t[::1] done = done_arr

    # binary heap with lazy deletion; capacity n + number of edges is enough
    cdef long cap = n + indices.shape[0] + 1
    hd_arr = np.zeros(cap, dtype=np.float64)
    hn_arr = np.zeros(cap, dtype=np.int64)
    cdef cnp.float64_t[::1] hd = hd_arr
    cdef cnp.int64_t[::1] hn = hn_arr
    cdef long size = 0

    cdef long u, v, k, i, child, parent
    cdef double d, nd, td
    cdef long tn

    # push source
    hd[0] = 0.0
    hn[0] = source
    size = 1
    best[source] = 0.0
    inq[source] = 1

    while size > 0:
        d = hd[0]
        u = hn[0]
        size -= 1
        hd[0] = hd[size]
        hn[0] = hn[size]
        # sift down
        i = 0
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and _heap_less(hd[child + 1], hn[child + 1], hd[child], hn[child]):
                child += 1
            if _heap_less(hd[child], hn[child], hd[i], hn[i]):
                td = hd[i]; tn = hn[i]
                hd[i] = hd[child]; hn[i] = hn[child]
                hd[child] = td; hn[child] = tn
                i = child
            else:
                break
        if done[u]:
            continue
        done[u] = 1
        dist[u] = d
        reached[u] = 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if done[v]:
                continue
            if inq[v] and nd >= best[v]:
                continue
            best[v] = nd
            inq[v] = 1
            # push (nd, v), sift up
            hd[size] = nd
            hn[size] = v
            i = size
            size += 1
            while i > 0:
                parent = (i - 1) // 2
                if _heap_less(hd[i], hn[i], hd[parent], hn[parent]):
                    td = hd[parent]; tn = hn[parent]
                    hd[parent] = hd[i]; hn[parent] = hn[i]
                    hd[i] = td; hn[i] = tn
                    i = parent
                else:
                    break
    return dist_arr, reached_arr


def triangle_scan(cnp.float64_t[:, ::1] values, cnp.uint8_t[:, ::1] finite,
                  double tol):
    """Exhaustive d(x,z) <= d(x,y) + d(y,z) scan over all n^3 triples.

    Only all-finite triples are falsifiable. Returns (worst, witness, checked)
    with the lexicographically-first witness (x, y, z) attaining worst, or
    None when no triple is falsifiable.
    """
    cdef long n = values.shape[0]
    cdef long x, y, z
    cdef double v, worst = 0.0
    cdef bint found = 0
    cdef long wx = 0, wy = 0, wz = 0
    for x in range(n):
        for y in range(n):
            if not finite[x, y]:
                continue
            for z in range(n):
                if not (finite[x, z] and finite[y, z]):
                    continue
                v = values[x, z] - (values[x, y] + values[y, z])
                if not found or v > worst:
                    found = 1
                    worst = v
                    wx = x; wy = y; wz = z
    if not found:
        return 0.0, None, n * n * n
    return worst, (wx, wy, wz), n * n * n
