"""qmlab: least-action energies on directed transition systems.

Exact energy solvers, quasimetric axiom auditing, a value-iteration oracle,
and small trainable energy models whose asymmetric head is quasimetric for
every parameter setting.
"""
from ._kernels import BACKEND
from .extcost import INF, ExtendedCost, ext_add, ext_min
from .system import (
    DirectedTransitionSystem,
    TrajectoryPath,
    parse_system,
    serialize_system,
    validate_system,
)
from .table import EnergyTable, parse_table, serialize_table
from .solver import (
    all_pairs_energy,
    brute_force_energy,
    single_source_energy,
    trajectory_action,
)
from .fields import EffortField, lift_effort_field, refine_field
from .audit import (
    AsymmetryProfile,
    AuditReport,
    asymmetry_profile,
    check_identity,
    check_nonnegativity,
    check_reflexivity,
    check_triangle,
    run_all_checks,
    symmetric_obstruction_bound,
)
from .value import CostToGo, bellman_residual, greedy_rollout, value_iteration
from .models import (
    EmbeddingTable,
    EnergyModel,
    MaxReluAsym,
    SumReluAsym,
    SymmetricL2,
    energy_matrix,
    grad_check,
    head_forward,
    head_grad,
    model_energy,
    parse_model,
    serialize_model,
)
from .train import (
    EvalMetrics,
    TrainConfig,
    TransitionDataset,
    evaluate_model,
    qrl_style_fit,
    supervised_fit,
)
from .envs import (
    make_fixture,
    make_gridworld,
    make_one_way_ring,
    make_random_digraph,
)

__version__ = "0.1.0"
