"""Learnable energy models over per-state embeddings.

Two heads: an asymmetric relu head that is a quasimetric for every parameter
setting (sum of positive coordinate gaps plus an epsilon-scaled norm), and a
symmetric L2 head kept as the foil that one-way reachability defeats.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _jsonfmt
from .errors import DimensionMismatchError, ParseError


@dataclass(frozen=True)
class SumReluAsym:
    """d(s, g) = sum_i max(0, g_i - s_i) + epsilon * ||g - s||_2.

    Quasimetric for every epsilon >= 0 (relu subadditivity + norm triangle
    inequality); identity of indiscernibles needs epsilon > 0.
    """

    epsilon: float = 0.01

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class MaxReluAsym:
    """d(s, g) = max_i max(0, g_i - s_i) + epsilon * ||g - s||_2.

    Also quasimetric for every epsilon >= 0 (max of quasipseudometrics).
    Unlike the sum head, whose antisymmetric part d(s,g) - d(g,s) is always a
    potential difference (relu(a) - relu(-a) = a summed per coordinate), the
    max head can carry asymmetry around directed cycles, which a one-way ring
    needs.
    """

    epsilon: float = 0.01

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class SymmetricL2:
    """d(s, g) = scale * ||g - s||_2; symmetric by construction."""

    scale: float = 1.0

    def __post_init__(self):
        if not (self.scale > 0):
            raise ValueError("scale must be positive")


HeadSpec = SumReluAsym | MaxReluAsym | SymmetricL2


def head_forward(z_s: np.ndarray, z_g: np.ndarray, head: HeadSpec) -> np.ndarray | float:
    """Scalar energy; broadcasts over leading batch dimensions."""
    z_s = np.asarray(z_s, dtype=np.float64)
    z_g = np.asarray(z_g, dtype=np.float64)
    if z_s.shape[-1] != z_g.shape[-1]:
        raise DimensionMismatchError(f"{z_s.shape[-1]} vs {z_g.shape[-1]}")
    diff = z_g - z_s
    norm = np.sqrt((diff * diff).sum(axis=-1))
    if isinstance(head, SumReluAsym):
        out = np.maximum(diff, 0.0).sum(axis=-1) + head.epsilon * norm
    elif isinstance(head, MaxReluAsym):
        out = np.maximum(diff, 0.0).max(axis=-1) + head.epsilon * norm
    else:
        out = head.scale * norm
    return float(out) if out.ndim == 0 else out


def head_grad(z_s: np.ndarray, z_g: np.ndarray, head: HeadSpec) -> tuple[np.ndarray, np.ndarray]:
    """(d/dz_s, d/dz_g) of head_forward; broadcasts like head_forward.

    Subgradient 0 at the relu kink; the norm gradient is 0 at z_s = z_g.
    """
    z_s = np.asarray(z_s, dtype=np.float64)
    z_g = np.asarray(z_g, dtype=np.float64)
    if z_s.shape[-1] != z_g.shape[-1]:
        raise DimensionMismatchError(f"{z_s.shape[-1]} vs {z_g.shape[-1]}")
    diff = z_g - z_s
    norm = np.sqrt((diff * diff).sum(axis=-1, keepdims=True))
    unit = np.divide(diff, norm, out=np.zeros_like(diff), where=norm > 0)
    if isinstance(head, SumReluAsym):
        g_g = (diff > 0).astype(np.float64) + head.epsilon * unit
    elif isinstance(head, MaxReluAsym):
        pos = np.maximum(diff, 0.0)
        top = pos.max(axis=-1, keepdims=True)
        is_top = (pos == top) & (top > 0)
        # subgradient on the first maximal coordinate only
        first = np.cumsum(is_top, axis=-1) == 1
        g_g = (is_top & first).astype(np.float64) + head.epsilon * unit
    else:
        g_g = head.scale * unit
    return -g_g, g_g


@dataclass(frozen=True)
class EmbeddingTable:
    """Lookup-table encoder over a finite state space."""

    vectors: np.ndarray  # (n_states, dim)

    @property
    def n_states(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @staticmethod
    def init_uniform(n_states: int, dim: int, seed: int, scale: float = 0.1) -> "EmbeddingTable":
        rng = np.random.default_rng(seed)
        return EmbeddingTable(rng.uniform(-scale, scale, size=(n_states, dim)))


@dataclass(frozen=True)
class EnergyModel:
    embeddings: EmbeddingTable
    head: HeadSpec

    @property
    def n_states(self) -> int:
        return self.embeddings.n_states

    def copy(self) -> "EnergyModel":
        return EnergyModel(EmbeddingTable(self.embeddings.vectors.copy()), self.head)


def model_energy(m: EnergyModel, x: int, y: int) -> float:
    z = m.embeddings.vectors
    return float(head_forward(z[x], z[y], m.head))


def energy_matrix(m: EnergyModel) -> np.ndarray:
    """All-pairs model energies, (n, n)."""
    z = m.embeddings.vectors
    return np.asarray(head_forward(z[:, None, :], z[None, :, :], m.head))


def grad_check(m: EnergyModel, probes: int, fd_step: float, seed: int) -> float:
    """Worst relative error of analytic head gradients vs central finite
    differences over random kink-excluded probe pairs. 0 for zero probes."""
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    rng = np.random.default_rng(seed)
    dim = m.embeddings.dim
    worst = 0.0
    for _ in range(probes):
        while True:
            z_s = rng.normal(size=dim)
            z_g = rng.normal(size=dim)
            gaps = z_g - z_s
            if np.abs(gaps).min() < 1e-3 or np.linalg.norm(gaps) < 1e-3:
                continue
            if isinstance(m.head, MaxReluAsym) and dim > 1:
                top2 = np.sort(np.maximum(gaps, 0.0))[-2:]
                if top2[1] - top2[0] < 1e-3:  # argmax tie is a kink too
                    continue
            break
        g_s, g_g = head_grad(z_s, z_g, m.head)
        fd_s = np.zeros(dim)
        fd_g = np.zeros(dim)
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = fd_step
            fd_s[i] = (head_forward(z_s + e, z_g, m.head) - head_forward(z_s - e, z_g, m.head)) / (2 * fd_step)
            fd_g[i] = (head_forward(z_s, z_g + e, m.head) - head_forward(z_s, z_g - e, m.head)) / (2 * fd_step)
        fd = np.concatenate([fd_s, fd_g])
        an = np.concatenate([g_s, g_g])
        err = np.linalg.norm(an - fd) / max(1.0, np.linalg.norm(fd))
        worst = max(worst, float(err))
    return worst


def serialize_model(m: EnergyModel) -> str:
    if isinstance(m.head, SumReluAsym):
        head_obj = {"variant": "sum_relu_asym", "epsilon": m.head.epsilon}
    elif isinstance(m.head, MaxReluAsym):
        head_obj = {"variant": "max_relu_asym", "epsilon": m.head.epsilon}
    else:
        head_obj = {"variant": "symmetric_l2", "scale": m.head.scale}
    obj = {
        "dim": m.embeddings.dim,
        "head": head_obj,
        "vectors": [[float(v) for v in row] for row in m.embeddings.vectors],
    }
    return _jsonfmt.dumps(obj)


def parse_model(text: str) -> EnergyModel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed checkpoint: {e.msg}", e.lineno, e.colno) from e
    try:
        dim = int(obj["dim"])
        head_obj = obj["head"]
        flat = np.asarray(obj["vectors"], dtype=np.float64)
    except (KeyError, TypeError) as e:
        raise ParseError(f"checkpoint missing field: {e}") from e
    variant = head_obj.get("variant")
    if variant == "sum_relu_asym":
        head: HeadSpec = SumReluAsym(float(head_obj["epsilon"]))
    elif variant == "max_relu_asym":
        head = MaxReluAsym(float(head_obj["epsilon"]))
    elif variant == "symmetric_l2":
        head = SymmetricL2(float(head_obj["scale"]))
    else:
        raise ParseError(f"unknown head variant {variant!r}")
    if flat.size % dim != 0:
        raise ParseError("vectors length is not a multiple of dim")
    return EnergyModel(EmbeddingTable(flat.reshape(-1, dim)), head)
