"""Deterministic environment generators.

Two asymmetry mechanisms are realized directly: one-way doors delete the
reverse edge (directed admissibility) and wind skews step costs by direction
(anisotropic effort). Cells are indexed row-major.
"""
from __future__ import annotations

import numpy as np

from .errors import NonAdjacentDoorError, UnknownFixtureError, WindOutOfRangeError
from .system import DirectedTransitionSystem

FIXTURES = {
    "tri3": DirectedTransitionSystem(
        n_states=3,
        edges=((0, 1, 1.0), (1, 2, 2.0), (2, 0, 5.0), (0, 2, 4.0)),
    ),
    "ow2": DirectedTransitionSystem(n_states=2, edges=((0, 1, 1.0),)),
}


def make_fixture(name: str) -> DirectedTransitionSystem:
    try:
        return FIXTURES[name]
    except KeyError:
        raise UnknownFixtureError(
            f"unknown fixture {name!r}; available: {sorted(FIXTURES)}"
        ) from None


def make_gridworld(
    w: int,
    h: int,
    one_way_doors: list[tuple[int, int]] = (),
    wind: tuple[float, float] = (0.0, 0.0),
) -> DirectedTransitionSystem:
    """4-neighbor grid, states row-major. With wind component w along an axis,
    a step costs 1 - w in the positive direction and 1 + w in the negative
    one (additive so costs stay positive for |w| < 1). Each one-way door
    (a, b) deletes the edge b -> a."""
    if w < 1 or h < 1:
        raise ValueError("grid must be at least 1x1")
    wx, wy = wind
    if not (abs(wx) < 1 and abs(wy) < 1):
        raise WindOutOfRangeError(f"wind components must satisfy |w| < 1, got {wind}")
    n = w * h
    deleted = set()
    for a, b in one_way_doors:
        ax, ay = a % w, a // w
        bx, by = b % w, b // w
        if abs(ax - bx) + abs(ay - by) != 1:
            raise NonAdjacentDoorError(f"door ({a}, {b}) endpoints are not adjacent")
        deleted.add((b, a))
    cost = {(1, 0): 1.0 - wx, (-1, 0): 1.0 + wx, (0, 1): 1.0 - wy, (0, -1): 1.0 + wy}
    edges = []
    for y in range(h):
        for x in range(w):
            src = y * w + x
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                nx, ny = x + dx, y + dy
                if not (0 <= nx < w and 0 <= ny < h):
                    continue
                dst = ny * w + nx
                if (src, dst) in deleted:
                    continue
                edges.append((src, dst, cost[(dx, dy)]))
    return DirectedTransitionSystem(n_states=n, edges=tuple(edges))


def make_one_way_ring(n: int) -> DirectedTransitionSystem:
    """Directed cycle with unit costs: E(x, y) = (y - x) mod n, so every pair
    is reachable but the gap between directions grows with n."""
    if n < 2:
        raise ValueError("ring needs at least 2 states")
    return DirectedTransitionSystem(
        n_states=n, edges=tuple((i, (i + 1) % n, 1.0) for i in range(n))
    )


def make_random_digraph(
    n: int,
    edge_prob: float,
    cost_range: tuple[float, float],
    seed: int,
) -> DirectedTransitionSystem:
    """Each ordered pair (i != j) gets an edge with probability edge_prob and
    a cost uniform in [lo, hi]; fully determined by the seed."""
    lo, hi = cost_range
    if not (0.0 <= edge_prob <= 1.0):
        raise ValueError("edge_prob must be in [0, 1]")
    if not (0 < lo <= hi):
        raise ValueError("cost range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if rng.random() < edge_prob:
                edges.append((i, j, lo + (hi - lo) * rng.random()))
    return DirectedTransitionSystem(n_states=n, edges=tuple(edges))


def make_random_dyadic_digraph(
    n: int,
    edge_prob: float,
    seed: int,
    grid: float = 0.125,
    steps: int = 32,
) -> DirectedTransitionSystem:
    """Random digraph whose costs are exact binary fractions (multiples of
    ``grid``), so oracle comparisons can demand bitwise equality."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if rng.random() < edge_prob:
                edges.append((i, j, grid * float(rng.integers(1, steps + 1))))
    return DirectedTransitionSystem(n_states=n, edges=tuple(edges))
