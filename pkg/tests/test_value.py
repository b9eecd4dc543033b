import json

import pytest

from qmlab.errors import InvalidSourceError, NoConvergenceError, StuckError
from qmlab.extcost import INF, ExtendedCost
from qmlab.solver import all_pairs_energy
from qmlab.system import DirectedTransitionSystem
from qmlab.value import (
    CostToGo,
    bellman_residual,
    greedy_rollout,
    serialize_cost_to_go,
    value_iteration,
)


def test_tri3_values(tri3):
    ctg = value_iteration(tri3, 2)
    assert [v.value for v in ctg.values] == [3.0, 2.0, 0.0]


def test_ow2_values(ow2):
    ctg = value_iteration(ow2, 0)
    assert ctg.values[0] == ExtendedCost.finite(0.0)
    assert ctg.values[1] == INF
    ctg = value_iteration(ow2, 1)
    assert [ctg.values[0].value, ctg.values[1].value] == [1.0, 0.0]


def test_values_equal_energy_columns(tri3, ow2, ring10, gridworld6):
    for sys_ in (tri3, ow2, ring10, gridworld6):
        table = all_pairs_energy(sys_)
        for goal in range(sys_.n_states):
            ctg = value_iteration(sys_, goal)
            for s in range(sys_.n_states):
                a, b = ctg.values[s], table.get(s, goal)
                assert a.is_infinite == b.is_infinite
                if a.is_finite:
                    assert abs(a.value - b.value) <= 1e-9


def test_goal_out_of_range(tri3):
    with pytest.raises(InvalidSourceError):
        value_iteration(tri3, 3)


def test_no_convergence_when_sweeps_exhausted():
    chain = DirectedTransitionSystem(
        n_states=4, edges=((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0))
    )
    with pytest.raises(NoConvergenceError):
        value_iteration(chain, 3, max_sweeps=1)
    ctg = value_iteration(chain, 3)
    assert [v.value for v in ctg.values] == [3.0, 2.0, 1.0, 0.0]


def test_greedy_rollout_realizes_value(tri3):
    ctg = value_iteration(tri3, 2)
    path, cost = greedy_rollout(tri3, ctg, 0)
    assert path.states == (0, 1, 2)
    assert cost == ctg.values[0]  # exact, not approximate


def test_greedy_rollout_from_goal(tri3):
    ctg = value_iteration(tri3, 2)
    path, cost = greedy_rollout(tri3, ctg, 2)
    assert path.states == (2,)
    assert cost == ExtendedCost.finite(0.0)


def test_greedy_rollout_stuck_on_infinite_start(ow2):
    ctg = value_iteration(ow2, 0)
    with pytest.raises(StuckError):
        greedy_rollout(ow2, ctg, 1)


def test_greedy_rollout_breaks_ties_toward_smaller_id():
    sys_ = DirectedTransitionSystem(
        n_states=4, edges=((0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0))
    )
    ctg = value_iteration(sys_, 3)
    path, _ = greedy_rollout(sys_, ctg, 0)
    assert path.states == (0, 1, 3)


def test_bellman_residual(tri3):
    ctg = value_iteration(tri3, 2)
    assert bellman_residual(tri3, ctg) == 0.0
    wrong = CostToGo(2, (ExtendedCost.finite(3.5), ctg.values[1], ctg.values[2]))
    assert bellman_residual(tri3, wrong) == pytest.approx(0.5)
    inconsistent = CostToGo(0, (ExtendedCost.finite(0.0), ExtendedCost.finite(1.0)))
    ow2 = DirectedTransitionSystem(2, ((0, 1, 1.0),))
    assert bellman_residual(ow2, inconsistent) == float("inf")


def test_serialize_cost_to_go(ow2):
    obj = json.loads(serialize_cost_to_go(value_iteration(ow2, 0)))
    assert obj == {"n_states": 2, "goal": 0, "values": [0.0, "inf"]}
