"""Fitting energy models to ground-truth energies.

Two modes: supervised regression onto the (capped) solved table, and a
transition-only objective that pushes all pair energies up to a cap while a
squared hinge keeps each observed step's energy below its cost, letting the
triangle structure of the head propagate local constraints. The second form
is this package's own instantiation of the constrain-and-maximize idea, not a
reproduction of any published objective.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .audit import asymmetry_profile
from .errors import CapTooSmallError, NonFiniteLossError
from .models import EnergyModel, energy_matrix, head_forward, head_grad
from .system import DirectedTransitionSystem
from .table import EnergyTable

DEFAULT_TRIPLE_BUDGET = 10**7


@dataclass(frozen=True)
class TransitionDataset:
    """(s, s_next, cost) triples, one per observed admissible step."""

    triples: tuple[tuple[int, int, float], ...]

    @staticmethod
    def from_system(sys: DirectedTransitionSystem) -> "TransitionDataset":
        return TransitionDataset(tuple((s, d, c) for s, d, c in sys.edges if s != d))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    steps: int = 2000
    batch_size: int = 64
    lambda_penalty: float = 100.0
    cap: float = 10.0
    seed: int = 0
    log_every: int = 100


@dataclass(frozen=True)
class EvalMetrics:
    mae_finite: float
    spearman_finite: float  # 0.0 when fewer than two distinct oracle values
    constraint_violation_mean: float
    triangle_violation_max: float
    one_way_max_error: float

    def to_json_obj(self) -> dict:
        return {
            "mae_finite": self.mae_finite,
            "spearman_finite": self.spearman_finite,
            "constraint_violation_mean": self.constraint_violation_mean,
            "triangle_violation_max": self.triangle_violation_max,
            "one_way_max_error": self.one_way_max_error,
        }


Curve = list[tuple[int, str, float]]  # (step, term, value) rows, CSV-ready


def _ordered_pairs(n: int) -> np.ndarray:
    pairs = [(s, g) for s in range(n) for g in range(n) if s != g]
    return np.asarray(pairs, dtype=np.int64)


def supervised_fit(
    m: EnergyModel, oracle: EnergyTable, cfg: TrainConfig
) -> tuple[EnergyModel, Curve]:
    """Least-squares regression of model energies onto the capped oracle by
    plain gradient descent on the embeddings."""
    finite_vals = oracle.values[oracle.finite]
    if finite_vals.size and cfg.cap <= float(finite_vals.max()):
        raise CapTooSmallError(f"cap {cfg.cap} must exceed the max finite target")
    targets = oracle.capped(cfg.cap)
    n = oracle.n_states
    pairs = _ordered_pairs(n)
    rng = np.random.default_rng(cfg.seed)
    z = m.embeddings.vectors.copy()
    curve: Curve = []

    def batch_loss_grad(idx):
        s, g = pairs[idx, 0], pairs[idx, 1]
        e = head_forward(z[s], z[g], m.head)
        r = e - targets[s, g]
        loss = float(np.mean(r * r))
        g_s, g_g = head_grad(z[s], z[g], m.head)
        coeff = (2.0 * r / len(idx))[:, None]
        grad = np.zeros_like(z)
        np.add.at(grad, s, coeff * g_s)
        np.add.at(grad, g, coeff * g_g)
        return loss, grad

    all_idx = np.arange(len(pairs))
    loss0, _ = batch_loss_grad(all_idx) if len(pairs) else (0.0, None)
    curve.append((0, "loss", loss0))
    for step in range(1, cfg.steps + 1):
        if len(pairs) == 0:
            break
        idx = rng.integers(0, len(pairs), size=min(cfg.batch_size, len(pairs)))
        loss, grad = batch_loss_grad(idx)
        if not np.isfinite(loss):
            raise NonFiniteLossError(f"loss diverged at step {step}")
        z -= cfg.learning_rate * grad
        if step % cfg.log_every == 0 or step == cfg.steps:
            full_loss, _ = batch_loss_grad(all_idx)
            curve.append((step, "loss", full_loss))
    out = EnergyModel(type(m.embeddings)(z), m.head)
    return out, curve


def qrl_style_fit(
    m: EnergyModel, data: TransitionDataset, cfg: TrainConfig
) -> tuple[EnergyModel, Curve]:
    """Ascend  mean min(d(s,g), cap)  -  lambda * mean max(0, d(s,s') - cost)^2
    over random ordered pairs and the observed transitions."""
    if not data.triples:
        raise ValueError("transition dataset is empty")
    n = m.n_states
    pairs = _ordered_pairs(n)
    ts = np.asarray([t[0] for t in data.triples], dtype=np.int64)
    tn = np.asarray([t[1] for t in data.triples], dtype=np.int64)
    tc = np.asarray([t[2] for t in data.triples], dtype=np.float64)
    rng = np.random.default_rng(cfg.seed)
    z = m.embeddings.vectors.copy()
    curve: Curve = []

    def terms():
        if len(pairs):
            d_all = head_forward(z[pairs[:, 0]], z[pairs[:, 1]], m.head)
            reward = float(np.mean(np.minimum(d_all, cfg.cap)))
        else:
            reward = 0.0
        viol = np.maximum(0.0, head_forward(z[ts], z[tn], m.head) - tc)
        return reward, float(np.mean(viol * viol))

    r0, p0 = terms()
    curve.append((0, "mean_capped_distance", r0))
    curve.append((0, "constraint_penalty", p0))
    for step in range(1, cfg.steps + 1):
        grad = np.zeros_like(z)
        if len(pairs):
            idx = rng.integers(0, len(pairs), size=min(cfg.batch_size, len(pairs)))
            s, g = pairs[idx, 0], pairs[idx, 1]
            d = head_forward(z[s], z[g], m.head)
            active = (d < cfg.cap).astype(np.float64)[:, None] / len(idx)
            g_s, g_g = head_grad(z[s], z[g], m.head)
            np.add.at(grad, s, active * g_s)
            np.add.at(grad, g, active * g_g)
        dv = head_forward(z[ts], z[tn], m.head)
        hinge = np.maximum(0.0, dv - tc)
        coeff = (-cfg.lambda_penalty * 2.0 * hinge / len(tc))[:, None]
        g_s, g_g = head_grad(z[ts], z[tn], m.head)
        np.add.at(grad, ts, coeff * g_s)
        np.add.at(grad, tn, coeff * g_g)
        if not np.all(np.isfinite(grad)):
            raise NonFiniteLossError(f"gradient diverged at step {step}")
        z += cfg.learning_rate * grad  # ascent
        if step % cfg.log_every == 0 or step == cfg.steps:
            r, p = terms()
            if not (np.isfinite(r) and np.isfinite(p)):
                raise NonFiniteLossError(f"objective diverged at step {step}")
            curve.append((step, "mean_capped_distance", r))
            curve.append((step, "constraint_penalty", p))
    out = EnergyModel(type(m.embeddings)(z), m.head)
    return out, curve


def evaluate_model(
    m: EnergyModel,
    oracle: EnergyTable,
    data: TransitionDataset,
    cap: float,
    seed: int = 0,
    triple_budget: int = DEFAULT_TRIPLE_BUDGET,
) -> EvalMetrics:
    n = oracle.n_states
    me = energy_matrix(m)
    off = ~np.eye(n, dtype=bool)
    fin = oracle.finite & off
    if fin.any():
        errs = np.abs(me[fin] - oracle.values[fin])
        mae = float(np.mean(errs))
        ovals = oracle.values[fin]
        # undefined (constant input on either side) reported as 0, not NaN
        if np.unique(ovals).size >= 2 and np.unique(me[fin]).size >= 2:
            rho = float(stats.spearmanr(ovals, me[fin]).statistic)
        else:
            rho = 0.0
    else:
        mae, rho = 0.0, 0.0
    if data.triples:
        viol = [max(0.0, float(me[s, d]) - c) for s, d, c in data.triples]
        cons = float(np.mean(viol))
    else:
        cons = 0.0
    tri = _triangle_violation_max(me, seed, triple_budget)
    one_way = asymmetry_profile(oracle).one_way_pairs
    owe = 0.0
    for x, y in one_way:
        fwd = abs(float(me[x, y]) - float(oracle.values[x, y]))
        bwd = abs(float(me[y, x]) - cap)
        owe = max(owe, max(fwd, bwd))
    return EvalMetrics(mae, rho, cons, tri, owe)


def _triangle_violation_max(me: np.ndarray, seed: int, budget: int) -> float:
    n = me.shape[0]
    if n**3 <= budget:
        worst = -np.inf
        for y in range(n):
            worst = max(worst, float((me - (me[:, y][:, None] + me[y, :][None, :])).max()))
        return max(0.0, worst)
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, n, size=budget)
    ys = rng.integers(0, n, size=budget)
    zs = rng.integers(0, n, size=budget)
    return max(0.0, float((me[xs, zs] - (me[xs, ys] + me[ys, zs])).max()))


def curve_to_csv(curve: Curve) -> str:
    lines = ["step,term,value"]
    for step, term, value in curve:
        lines.append(f"{step},{term},{value!r}")
    return "\n".join(lines) + "\n"


def metrics_to_json(metrics: EvalMetrics) -> str:
    return json.dumps(metrics.to_json_obj(), indent=2) + "\n"
