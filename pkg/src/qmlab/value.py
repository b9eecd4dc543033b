"""Goal-conditioned optimal cost-to-go by dynamic programming.

Each edge is a deterministic action; accumulated cost is undiscounted with
the goal absorbing, so the fixed point is the energy column of the goal.
A greedy rollout certifies finite values by realizing them with a path.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import _jsonfmt
from .errors import InvalidSourceError, NoConvergenceError, StuckError
from .extcost import INF, ExtendedCost
from .system import DirectedTransitionSystem, TrajectoryPath, validate_system


@dataclass(frozen=True)
class CostToGo:
    goal: int
    values: tuple[ExtendedCost, ...]  # per start state


def value_iteration(
    sys: DirectedTransitionSystem,
    goal: int,
    tol: float = 1e-12,
    max_sweeps: int | None = None,
) -> CostToGo:
    """Gauss-Seidel sweeps of V(s) <- min over edges s->s' of cost + V(s'),
    with V(goal) pinned to 0 and everything else starting unreachable.

    Converges in <= n sweeps for nonnegative deterministic costs; stops after
    the first sweep whose max change is <= tol (Infinite -> Infinite counts
    as zero change).
    """
    if not (0 <= goal < sys.n_states):
        raise InvalidSourceError(f"goal {goal} out of range")
    if tol <= 0:
        raise ValueError("tol must be positive")
    validate_system(sys)
    n = sys.n_states
    if max_sweeps is None:
        max_sweeps = n + 2
    # None encodes Infinite so no sentinel float enters the arithmetic
    v: list[float | None] = [None] * n
    v[goal] = 0.0
    adj = [sys.out_edges(s) for s in range(n)]
    for _ in range(max_sweeps):
        change = 0.0
        changed_from_inf = False
        for s in range(n):
            if s == goal:
                continue
            best: float | None = None
            for dst, cost in adj[s]:
                if v[dst] is None:
                    continue
                cand = cost + v[dst]
                if best is None or cand < best:
                    best = cand
            if best is None:
                continue  # still unreachable; Infinite -> Infinite is zero change
            if v[s] is None:
                changed_from_inf = True
            else:
                change = max(change, abs(v[s] - best))
            v[s] = best
        if not changed_from_inf and change <= tol:
            return CostToGo(
                goal,
                tuple(INF if x is None else ExtendedCost.finite(x) for x in v),
            )
    raise NoConvergenceError(
        f"value iteration did not converge in {max_sweeps} sweeps (residual {change})"
    )


def bellman_residual(sys: DirectedTransitionSystem, ctg: CostToGo) -> float:
    """Max |V(s) - min over edges (cost + V(s'))| over non-goal states with a
    finite backup; states whose backup and value are both Infinite contribute 0."""
    worst = 0.0
    for s in range(sys.n_states):
        if s == ctg.goal:
            worst = max(worst, abs(ctg.values[s].value))
            continue
        best: float | None = None
        for dst, cost in sys.out_edges(s):
            if ctg.values[dst].is_infinite:
                continue
            cand = cost + ctg.values[dst].value
            if best is None or cand < best:
                best = cand
        if best is None:
            if ctg.values[s].is_finite:
                return float("inf")
            continue
        if ctg.values[s].is_infinite:
            return float("inf")
        worst = max(worst, abs(ctg.values[s].value - best))
    return worst


def greedy_rollout(
    sys: DirectedTransitionSystem,
    ctg: CostToGo,
    start: int,
    max_steps: int | None = None,
) -> tuple[TrajectoryPath, ExtendedCost]:
    """Follow the edge minimizing cost + V(next) (ties to the smaller state id)
    until the goal or the step limit; the accumulated cost of a finite start
    equals V(start) exactly because each greedy step realizes the minimum the
    sweep computed."""
    if ctg.values[start].is_infinite:
        raise StuckError(f"start {start} has infinite cost-to-go")
    if max_steps is None:
        max_steps = sys.n_states
    states = [start]
    step_costs: list[float] = []
    s = start
    for _ in range(max_steps):
        if s == ctg.goal:
            break
        best_key: float | None = None
        best_dst = -1
        best_cost = 0.0
        for dst, cost in sys.out_edges(s):
            if ctg.values[dst].is_infinite:
                continue
            key = cost + ctg.values[dst].value
            if best_key is None or key < best_key:
                best_key, best_dst, best_cost = key, dst, cost
        if best_key is None:
            raise StuckError(f"no finite-valued successor at state {s}")
        states.append(best_dst)
        step_costs.append(best_cost)
        s = best_dst
    # right-associated sum mirrors V's recursion, keeping equality bitwise
    total = 0.0
    for c in reversed(step_costs):
        total = c + total
    return TrajectoryPath(tuple(states)), ExtendedCost.finite(total)


def serialize_cost_to_go(ctg: CostToGo) -> str:
    vals = [c.value if c.is_finite else "inf" for c in ctg.values]
    return _jsonfmt.dumps({"n_states": len(ctg.values), "goal": ctg.goal, "values": vals})
