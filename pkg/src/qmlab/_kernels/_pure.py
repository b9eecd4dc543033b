"""Pure-Python/numpy fallback for the hot kernels.

Must be observably identical to the compiled backend: same distances bit for
bit (identical relaxation sums) and the same lexicographically-first triangle
witness.
"""
from __future__ import annotations

import heapq

import numpy as np


def dijkstra_csr(indptr, indices, weights, source, n):
    """Label-setting single-source shortest paths on nonnegative weights.

    Heap ties broken by smaller state id. Returns (dist, reached) where
    ``dist`` is float64 (meaningful only where ``reached``) and ``reached``
    is uint8.
    """
    dist = np.zeros(n, dtype=np.float64)
    reached = np.zeros(n, dtype=np.uint8)
    done = np.zeros(n, dtype=bool)
    best = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        dist[u] = d
        reached[u] = 1
        for k in range(indptr[u], indptr[u + 1]):
            v = int(indices[k])
            nd = d + weights[k]
            if not done[v] and (v not in best or nd < best[v]):
                best[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist, reached


def triangle_scan(values, finite, tol):
    """Exhaustive scan of d(x,z) <= d(x,y) + d(y,z) over all n^3 triples.

    Only triples with all three entries finite are falsifiable (an infinite
    right-hand side always passes). Returns (worst, witness, checked) where
    ``witness`` is the lexicographically-first (x, y, z) attaining ``worst``,
    or None when no triple is falsifiable; ``worst`` may be negative (slack).
    """
    n = values.shape[0]
    checked = n * n * n
    fin = finite.astype(bool)
    worst = -np.inf
    witness = None
    for y in range(n):
        if not fin[:, y].any() or not fin[y, :].any():
            continue
        rhs = values[:, y][:, None] + values[y, :][None, :]
        mask = fin & fin[:, y][:, None] & fin[y, :][None, :]
        if not mask.any():
            continue
        viol = np.where(mask, values - rhs, -np.inf)
        m = viol.max()
        if m > worst:
            worst = m
            xs, zs = np.nonzero(viol == m)
            # first in (x, y, z) lexicographic order for this fixed y
            witness = (int(xs[0]), y, int(zs[0]))
        elif m == worst and witness is not None:
            xs, zs = np.nonzero(viol == m)
            cand = (int(xs[0]), y, int(zs[0]))
            if cand < witness:
                witness = cand
    if witness is None:
        return 0.0, None, checked
    return float(worst), witness, checked
