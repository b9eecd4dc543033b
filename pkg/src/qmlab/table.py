"""All-pairs energy tables over the extended cost codomain."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _jsonfmt
from .errors import ParseError
from .extcost import INF, ExtendedCost


@dataclass(frozen=True)
class EnergyTable:
    """n x n matrix of extended costs.

    Stored as a float matrix plus a finiteness mask; ``values[i, j]`` is
    meaningful only where ``finite[i, j]``. Use :meth:`get` for the
    extended-cost view.
    """

    n_states: int
    values: np.ndarray  # float64 (n, n)
    finite: np.ndarray  # bool (n, n)

    def get(self, i: int, j: int) -> ExtendedCost:
        if self.finite[i, j]:
            return ExtendedCost.finite(float(self.values[i, j]))
        return INF

    def row(self, i: int) -> list[ExtendedCost]:
        return [self.get(i, j) for j in range(self.n_states)]

    def column(self, j: int) -> list[ExtendedCost]:
        return [self.get(i, j) for i in range(self.n_states)]

    def capped(self, cap: float) -> np.ndarray:
        """Float matrix with Infinite replaced by cap."""
        return np.where(self.finite, self.values, cap)

    @staticmethod
    def from_rows(rows: list[list[ExtendedCost]]) -> "EnergyTable":
        n = len(rows)
        values = np.zeros((n, n), dtype=np.float64)
        finite = np.zeros((n, n), dtype=bool)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("table must be square")
            for j, c in enumerate(row):
                if c.is_finite:
                    values[i, j] = c.value
                    finite[i, j] = True
        return EnergyTable(n, values, finite)


def serialize_table(t: EnergyTable) -> str:
    rows = []
    for i in range(t.n_states):
        rows.append([float(t.values[i, j]) if t.finite[i, j] else "inf" for j in range(t.n_states)])
    return _jsonfmt.dumps({"n_states": t.n_states, "rows": rows})


def parse_table(text: str) -> EnergyTable:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed table file: {e.msg}", e.lineno, e.colno) from e
    try:
        n = int(obj["n_states"])
        rows = obj["rows"]
    except (KeyError, TypeError) as e:
        raise ParseError("table file needs keys 'n_states' and 'rows'") from e
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, got {len(rows)}")
    values = np.zeros((n, n), dtype=np.float64)
    finite = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {i} has length {len(row)}, expected {n}")
        for j, c in enumerate(row):
            if c == "inf":
                continue
            if isinstance(c, str):
                raise ParseError(f"entry ({i},{j}) has unrecognized value {c!r}")
            values[i, j] = float(c)
            finite[i, j] = True
    return EnergyTable(n, values, finite)
