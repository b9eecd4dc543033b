"""Least-action energies on transition systems.

The energy E(x, y) is the infimum of accumulated step cost over all edge
paths x -> y; with nonnegative costs a label-setting sweep computes the
infimum exactly. A brute-force path enumerator serves as the independent
oracle.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import BudgetExceededError, InvalidSourceError
from .extcost import INF, ExtendedCost
from .system import DirectedTransitionSystem, TrajectoryPath, validate_system
from .table import EnergyTable

DEFAULT_EXPANSION_CAP = 10**6


def trajectory_action(sys: DirectedTransitionSystem, path: TrajectoryPath) -> ExtendedCost:
    """Total step cost along the path; Infinite when any step is inadmissible
    (no trajectory exists), Finite(0) for a single-state path."""
    total = 0.0
    for a, b in zip(path.states, path.states[1:]):
        c = sys.edge_cost(a, b)
        if c is None:
            return INF
        total += c
    return ExtendedCost.finite(total)


def single_source_energy(sys: DirectedTransitionSystem, source: int) -> list[ExtendedCost]:
    if not (0 <= source < sys.n_states):
        raise InvalidSourceError(f"source {source} out of range for {sys.n_states} states")
    validate_system(sys)
    dist, reached = _single_source_raw(sys, source)
    return [ExtendedCost.finite(float(dist[j])) if reached[j] else INF for j in range(sys.n_states)]


def _single_source_raw(sys: DirectedTransitionSystem, source: int) -> tuple[np.ndarray, np.ndarray]:
    indptr, indices, weights = sys.csr()
    return _kernels.dijkstra_csr(indptr, indices, weights, source, sys.n_states)


def all_pairs_energy(sys: DirectedTransitionSystem) -> EnergyTable:
    """Row x is single_source_energy(sys, x); diagonal is exactly 0."""
    validate_system(sys)
    n = sys.n_states
    values = np.zeros((n, n), dtype=np.float64)
    finite = np.zeros((n, n), dtype=bool)
    for x in range(n):  # sources assembled in order; independent computations
        dist, reached = _single_source_raw(sys, x)
        values[x] = dist
        finite[x] = reached.astype(bool)
    return EnergyTable(n, values, finite)


def brute_force_energy(
    sys: DirectedTransitionSystem,
    x: int,
    y: int,
    max_hops: int,
    expansion_cap: int = DEFAULT_EXPANSION_CAP,
) -> ExtendedCost:
    """Exhaustive minimum of trajectory_action over simple paths x -> y with at
    most max_hops edges.

    Simple paths suffice: nonnegative cycles never reduce cost. This is the
    oracle the production solver is checked against, so it stays a plain
    enumeration with no shortest-path machinery.
    """
    if not (0 <= x < sys.n_states and 0 <= y < sys.n_states):
        raise InvalidSourceError(f"state out of range: {x}, {y}")
    if x == y:
        return ExtendedCost.finite(0.0)
    adj = [sys.out_edges(s) for s in range(sys.n_states)]
    best: float | None = None
    expansions = 0
    on_path = [False] * sys.n_states
    on_path[x] = True

    def dfs(u: int, cost: float, hops: int) -> None:
        nonlocal best, expansions
        for v, c in adj[u]:
            expansions += 1
            if expansions > expansion_cap:
                raise BudgetExceededError(f"enumeration exceeded {expansion_cap} node expansions")
            if on_path[v]:
                continue
            nc = cost + c
            if v == y:
                if best is None or nc < best:
                    best = nc
                continue
            if hops + 1 < max_hops:
                on_path[v] = True
                dfs(v, nc, hops + 1)
                on_path[v] = False

    if max_hops >= 1:
        dfs(x, 0.0, 0)
    return INF if best is None else ExtendedCost.finite(best)
