"""Grid effort fields and their lift to discrete transition systems.

A field samples a local effort for each (cell, unit displacement) pair over
the 4-neighborhood; lifting multiplies by the grid spacing so each step
approximates one segment of an action integral. Anisotropic efforts
(moving +v costing differently from -v) lift to asymmetric edge costs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import _jsonfmt
from .errors import ParseError
from .system import DirectedTransitionSystem

# unit displacements, fixed order: east, west, south, north
DISPLACEMENTS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class EffortField:
    """``width x height`` cells, spacing ``delta``; cells indexed row-major
    (cell = y * width + x). ``efforts[(cell, (dx, dy))]`` >= 0."""

    width: int
    height: int
    delta: float
    efforts: dict

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("field dimensions must be >= 1x1")
        if not (self.delta > 0):
            raise ValueError("delta must be positive")
        for (cell, disp), e in self.efforts.items():
            if disp not in DISPLACEMENTS:
                raise ValueError(f"displacement {disp} not in the 4-neighborhood")
            if not (e >= 0) or e != e or e == float("inf"):
                raise ValueError(f"effort at cell {cell}, {disp} must be finite and >= 0")

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    def cell_index(self, x: int, y: int) -> int:
        return y * self.width + x

    @staticmethod
    def uniform(width: int, height: int, delta: float, effort: float) -> "EffortField":
        efforts = {}
        for cell in range(width * height):
            for disp in DISPLACEMENTS:
                efforts[(cell, disp)] = float(effort)
        return EffortField(width, height, float(delta), efforts)

    @staticmethod
    def wind(width: int, height: int, delta: float, wx: float, wy: float) -> "EffortField":
        """Anisotropic field: effort 1 - w along the wind, 1 + w against it,
        per axis. Requires |wx|, |wy| < 1 so all efforts stay positive."""
        if not (abs(wx) < 1 and abs(wy) < 1):
            raise ValueError("wind components must satisfy |w| < 1")
        per_disp = {(1, 0): 1.0 - wx, (-1, 0): 1.0 + wx, (0, 1): 1.0 - wy, (0, -1): 1.0 + wy}
        efforts = {}
        for cell in range(width * height):
            for disp in DISPLACEMENTS:
                efforts[(cell, disp)] = per_disp[disp]
        return EffortField(width, height, float(delta), efforts)


def lift_effort_field(field: EffortField) -> DirectedTransitionSystem:
    """One state per cell; edge cost = effort(cell, displacement) * delta."""
    edges = []
    for y in range(field.height):
        for x in range(field.width):
            cell = field.cell_index(x, y)
            for dx, dy in DISPLACEMENTS:
                nx, ny = x + dx, y + dy
                if not (0 <= nx < field.width and 0 <= ny < field.height):
                    continue
                key = (cell, (dx, dy))
                if key not in field.efforts:
                    continue
                edges.append((cell, field.cell_index(nx, ny), field.efforts[key] * field.delta))
    return DirectedTransitionSystem(n_states=field.n_cells, edges=tuple(edges))


def refine_field(field: EffortField) -> EffortField:
    """Halve the spacing and double the resolution; each fine cell copies the
    effort of the coarse cell covering it (nearest-neighbor resampling)."""
    w2, h2 = 2 * field.width, 2 * field.height
    efforts = {}
    for y in range(h2):
        for x in range(w2):
            cell = y * w2 + x
            coarse = (y // 2) * field.width + (x // 2)
            for disp in DISPLACEMENTS:
                key = (coarse, disp)
                if key in field.efforts:
                    efforts[(cell, disp)] = field.efforts[key]
    return EffortField(w2, h2, field.delta / 2.0, efforts)


def serialize_field(field: EffortField) -> str:
    rows = sorted(
        ((cell, dx, dy, e) for (cell, (dx, dy)), e in field.efforts.items()),
        key=lambda r: (r[0], DISPLACEMENTS.index((r[1], r[2]))),
    )
    obj = {
        "width": field.width,
        "height": field.height,
        "delta": field.delta,
        "efforts": [[c, dx, dy, e] for c, dx, dy, e in rows],
    }
    return _jsonfmt.dumps(obj)


def parse_field(text: str) -> EffortField:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed field file: {e.msg}", e.lineno, e.colno) from e
    try:
        efforts = {
            (int(c), (int(dx), int(dy))): float(e) for c, dx, dy, e in obj["efforts"]
        }
        return EffortField(int(obj["width"]), int(obj["height"]), float(obj["delta"]), efforts)
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"invalid field file: {e}") from e
