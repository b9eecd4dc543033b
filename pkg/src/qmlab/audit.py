"""Quasimetric axiom auditing on energy tables.

Four checks (reflexivity, nonnegativity, identity of indiscernibles, triangle
inequality), an asymmetry profile, and the lower bound on how badly any
symmetric finite energy must err on one-way pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import CapTooSmallError
from .table import EnergyTable

DEFAULT_TOL = 1e-9
DEFAULT_TRIPLE_BUDGET = 10**7
MAX_WITNESSES = 20


@dataclass(frozen=True)
class AuditReport:
    axiom: str  # reflexivity | nonnegativity | identity | triangle
    passed: bool
    worst_violation: float
    witnesses: list  # index tuples with the offending values; nonempty when failed
    pairs_checked: int
    mode: dict  # {"kind": "exhaustive"} or {"kind": "sampled", "seed": ..., "samples": ...}

    def to_json_obj(self) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "witnesses": [list(w) for w in self.witnesses],
            "pairs_checked": self.pairs_checked,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class AsymmetryProfile:
    max_gap: float
    mean_gap: float
    one_way_pairs: list  # (x, y) with E(x,y) finite, E(y,x) infinite

    def to_json_obj(self) -> dict:
        return {
            "max_gap": self.max_gap,
            "mean_gap": self.mean_gap,
            "one_way_pairs": [list(p) for p in self.one_way_pairs],
        }


_EXHAUSTIVE = {"kind": "exhaustive"}


def check_reflexivity(t: EnergyTable, tol: float = DEFAULT_TOL) -> AuditReport:
    """Passes iff every diagonal entry is finite with |value| <= tol."""
    witnesses = []
    worst = 0.0
    for i in range(t.n_states):
        if not t.finite[i, i]:
            worst = float("inf")
            witnesses.append((i, i, "inf"))
        else:
            v = abs(float(t.values[i, i]))
            if v > tol:
                witnesses.append((i, i, float(t.values[i, i])))
            worst = max(worst, v)
    witnesses.sort(key=lambda w: (w[0], w[1]))
    return AuditReport(
        "reflexivity", not witnesses, worst, witnesses[:MAX_WITNESSES], t.n_states, _EXHAUSTIVE
    )


def check_nonnegativity(t: EnergyTable, tol: float = DEFAULT_TOL) -> AuditReport:
    """Passes iff every finite entry is >= -tol; infinite entries pass."""
    witnesses = []
    worst = 0.0
    bad = t.finite & (t.values < -tol)
    for i, j in zip(*np.nonzero(bad)):
        witnesses.append((int(i), int(j), float(t.values[i, j])))
    neg = np.where(t.finite, -t.values, 0.0)
    worst = float(max(0.0, neg.max())) if t.n_states else 0.0
    return AuditReport(
        "nonnegativity", not witnesses, worst, witnesses[:MAX_WITNESSES],
        t.n_states * t.n_states, _EXHAUSTIVE,
    )


def check_identity(t: EnergyTable, tol: float = DEFAULT_TOL) -> AuditReport:
    """Identity of indiscernibles: no off-diagonal entry may be finite with
    value <= tol (distinct states at energy ~0 would be indiscernible)."""
    witnesses = []
    off = ~np.eye(t.n_states, dtype=bool)
    bad = t.finite & off & (t.values <= tol)
    for i, j in zip(*np.nonzero(bad)):
        witnesses.append((int(i), int(j), float(t.values[i, j])))
    # violation magnitude: how far below the tolerance the entry sits
    worst = float((tol - t.values[bad]).max()) if witnesses else 0.0
    return AuditReport(
        "identity", not witnesses, worst, witnesses[:MAX_WITNESSES],
        t.n_states * (t.n_states - 1), _EXHAUSTIVE,
    )


def check_triangle(
    t: EnergyTable,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_TRIPLE_BUDGET,
    seed: int = 0,
) -> AuditReport:
    """E(x,z) <= E(x,y) + E(y,z) + tol in extended arithmetic: an infinite
    right-hand side always passes, so only all-finite triples are falsifiable.
    Exhaustive when n^3 <= budget, else `budget` seeded uniform triples."""
    n = t.n_states
    fin = np.ascontiguousarray(t.finite, dtype=np.uint8)
    vals = np.ascontiguousarray(t.values, dtype=np.float64)
    if n**3 <= budget:
        worst, witness, checked = _kernels.triangle_scan(vals, fin, tol)
        worst = max(0.0, float(worst))
        mode = _EXHAUSTIVE
        if worst > tol:
            witnesses = _collect_triangle_witnesses(t, tol)
        else:
            witnesses = []
        return AuditReport("triangle", worst <= tol, worst, witnesses, checked, mode)
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, n, size=budget)
    ys = rng.integers(0, n, size=budget)
    zs = rng.integers(0, n, size=budget)
    falsifiable = t.finite[xs, zs] & t.finite[xs, ys] & t.finite[ys, zs]
    viol = np.where(falsifiable, vals[xs, zs] - (vals[xs, ys] + vals[ys, zs]), -np.inf)
    worst = float(viol.max()) if budget else -np.inf
    worst = max(0.0, worst)
    witnesses = []
    if worst > tol:
        idx = np.nonzero(viol > tol)[0]
        trips = sorted((int(xs[i]), int(ys[i]), int(zs[i])) for i in idx)
        witnesses = [
            (x, y, z, float(vals[x, z]), float(vals[x, y] + vals[y, z]))
            for x, y, z in trips[:MAX_WITNESSES]
        ]
    mode = {"kind": "sampled", "seed": seed, "samples": budget}
    return AuditReport("triangle", worst <= tol, worst, witnesses, budget, mode)


def _collect_triangle_witnesses(t: EnergyTable, tol: float) -> list:
    """Lexicographically-first violating triples, with both sides' values."""
    out = []
    vals = t.values
    fin = t.finite
    n = t.n_states
    for x in range(n):
        for y in range(n):
            if not fin[x, y]:
                continue
            for z in range(n):
                if not (fin[x, z] and fin[y, z]):
                    continue
                rhs = vals[x, y] + vals[y, z]
                if vals[x, z] - rhs > tol:
                    out.append((x, y, z, float(vals[x, z]), float(rhs)))
                    if len(out) >= MAX_WITNESSES:
                        return out
    return out


def run_all_checks(
    t: EnergyTable,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_TRIPLE_BUDGET,
    seed: int = 0,
) -> list[AuditReport]:
    return [
        check_reflexivity(t, tol),
        check_nonnegativity(t, tol),
        check_identity(t, tol),
        check_triangle(t, tol, budget, seed),
    ]


def asymmetry_profile(t: EnergyTable) -> AsymmetryProfile:
    """Gap statistics over unordered pairs finite in both directions, plus the
    one-way pairs (finite forward, infinite backward)."""
    gaps = []
    one_way = []
    n = t.n_states
    for x in range(n):
        for y in range(n):
            if x < y and t.finite[x, y] and t.finite[y, x]:
                gaps.append(abs(float(t.values[x, y]) - float(t.values[y, x])))
            if x != y and t.finite[x, y] and not t.finite[y, x]:
                one_way.append((x, y))
    max_gap = max(gaps) if gaps else 0.0
    mean_gap = sum(gaps) / len(gaps) if gaps else 0.0
    return AsymmetryProfile(max_gap, mean_gap, one_way)


def symmetric_obstruction_bound(t: EnergyTable, cap: float) -> float:
    """Lower bound on the worst-case absolute error of ANY symmetric energy
    against the capped table: a single symmetric value s for a one-way pair
    (x, y) must satisfy max(|s - E(x,y)|, |s - cap|) >= (cap - E(x,y)) / 2.
    Zero when the reachability relation is symmetric."""
    finite_vals = t.values[t.finite]
    if finite_vals.size and cap <= float(finite_vals.max()):
        raise CapTooSmallError(
            f"cap {cap} must exceed every finite entry (max {float(finite_vals.max())})"
        )
    profile = asymmetry_profile(t)
    if not profile.one_way_pairs:
        return 0.0
    return max((cap - float(t.values[x, y])) / 2.0 for x, y in profile.one_way_pairs)


def serialize_reports(reports: list[AuditReport], extra: dict | None = None) -> str:
    obj = {"checks": [r.to_json_obj() for r in reports]}
    if extra:
        obj.update(extra)
    return json.dumps(obj, indent=2) + "\n"
