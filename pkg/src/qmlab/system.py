"""Directed transition systems: finite states, nonnegatively weighted edges.

States are dense integer ids in ``[0, n_states)``. One edge is one admissible
unit step; finite edge paths are the admissible trajectories.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _jsonfmt
from .errors import DuplicateEdgeError, NegativeCostError, ParseError


@dataclass(frozen=True)
class ValidationReport:
    n_states: int
    n_edges: int
    min_positive_cost: float | None  # None when no inter-state edge exists
    has_zero_cost_step: bool  # warning: identity of indiscernibles not guaranteed


@dataclass(frozen=True)
class TrajectoryPath:
    """Ordered state sequence, length >= 1; admissible iff every consecutive
    pair is an existing edge."""

    states: tuple[int, ...]

    def __post_init__(self):
        if len(self.states) < 1:
            raise ValueError("path must contain at least one state")

    def __len__(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class DirectedTransitionSystem:
    """Immutable after construction; safe to share across readers."""

    n_states: int
    edges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...] | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(s), int(d), float(c)) for s, d, c in self.edges))
        for s, d, _ in self.edges:
            if not (0 <= s < self.n_states and 0 <= d < self.n_states):
                raise ValueError(f"edge {s}->{d} out of range for {self.n_states} states")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.n_states:
                raise ValueError("labels length must equal n_states")

    def edge_cost(self, src: int, dst: int) -> float | None:
        """Cost of the edge src->dst, or None when absent."""
        return self._edge_map().get((src, dst))

    def out_edges(self, src: int) -> list[tuple[int, float]]:
        """Outgoing (dst, cost), self-loops excluded, sorted by dst."""
        return self._adjacency()[src]

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Adjacency in CSR form (indptr, indices, weights); self-loops excluded,
        neighbors in ascending dst order so relaxation order is deterministic."""
        if "csr" not in self._cache:
            adj = self._adjacency()
            indptr = np.zeros(self.n_states + 1, dtype=np.int64)
            indices = []
            weights = []
            for s in range(self.n_states):
                for d, c in adj[s]:
                    indices.append(d)
                    weights.append(c)
                indptr[s + 1] = len(indices)
            self._cache["csr"] = (
                indptr,
                np.asarray(indices, dtype=np.int64),
                np.asarray(weights, dtype=np.float64),
            )
        return self._cache["csr"]

    def _edge_map(self) -> dict[tuple[int, int], float]:
        if "edge_map" not in self._cache:
            self._cache["edge_map"] = {(s, d): c for s, d, c in self.edges}
        return self._cache["edge_map"]

    def _adjacency(self) -> list[list[tuple[int, float]]]:
        if "adj" not in self._cache:
            adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_states)]
            for s, d, c in self.edges:
                if s != d:  # self-loops never help: E(x,x) = 0 by the constant path
                    adj[s].append((d, c))
            for lst in adj:
                lst.sort()
            self._cache["adj"] = adj
        return self._cache["adj"]


def validate_system(sys: DirectedTransitionSystem) -> ValidationReport:
    """Reject negative costs and duplicate (src, dst) pairs; record the minimum
    inter-state step cost (the discrete stand-in for a positive effort lower
    bound) and flag zero-cost steps."""
    seen: set[tuple[int, int]] = set()
    min_pos: float | None = None
    has_zero = False
    for s, d, c in sys.edges:
        if c < 0.0 or c != c:
            raise NegativeCostError(s, d, c)
        if (s, d) in seen:
            raise DuplicateEdgeError(s, d)
        seen.add((s, d))
        if s != d:
            if c == 0.0:
                has_zero = True
            else:
                min_pos = c if min_pos is None else min(min_pos, c)
    return ValidationReport(sys.n_states, len(sys.edges), min_pos, has_zero)


def _render_cost(c: float) -> float | int:
    return c


def serialize_system(sys: DirectedTransitionSystem) -> str:
    """Byte-stable text form: fixed key order, shortest round-trip floats."""
    obj: dict = {
        "n_states": sys.n_states,
        "edges": [[s, d, _render_cost(c)] for s, d, c in sys.edges],
    }
    if sys.labels is not None:
        obj["labels"] = list(sys.labels)
    return _jsonfmt.dumps(obj)


def parse_system(text: str) -> DirectedTransitionSystem:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed system file: {e.msg}", e.lineno, e.colno) from e
    if not isinstance(obj, dict):
        raise ParseError("top-level value must be an object")
    try:
        n_states = int(obj["n_states"])
        raw_edges = obj["edges"]
    except KeyError as e:
        raise ParseError(f"missing required key {e.args[0]!r}") from e
    edges = []
    for i, e in enumerate(raw_edges):
        if not (isinstance(e, list) and len(e) == 3):
            raise ParseError(f"edge #{i} must be a [src, dst, cost] triple")
        src, dst, cost = e
        if isinstance(cost, str):
            # "inf" is part of the grammar for tables, but an admissible step
            # must have finite cost.
            raise ParseError(f"edge #{i} ({src}->{dst}) has non-finite cost {cost!r}")
        edges.append((int(src), int(dst), float(cost)))
    labels = obj.get("labels")
    if labels is not None:
        labels = tuple(str(x) for x in labels)
    return DirectedTransitionSystem(n_states=n_states, edges=tuple(edges), labels=labels)
