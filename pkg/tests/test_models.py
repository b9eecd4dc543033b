import math

import numpy as np
import pytest

from qmlab.errors import DimensionMismatchError, ParseError
from qmlab.models import (
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

HEADS = [
    SumReluAsym(0.0),
    SumReluAsym(0.01),
    SumReluAsym(1.0),
    MaxReluAsym(0.01),
    SymmetricL2(1.0),
]


def test_sum_head_examples():
    z_s, z_g = np.array([0.0, 0.0]), np.array([1.0, 2.0])
    assert head_forward(z_s, z_g, SumReluAsym(0.0)) == 3.0
    assert head_forward(z_g, z_s, SumReluAsym(0.0)) == 0.0  # fully asymmetric
    got = head_forward(z_s, z_g, SumReluAsym(0.1))
    assert got == pytest.approx(3.0 + 0.1 * math.sqrt(5.0))


def test_max_head_examples():
    z_s, z_g = np.array([0.0, 0.0]), np.array([1.0, 2.0])
    assert head_forward(z_s, z_g, MaxReluAsym(0.0)) == 2.0
    assert head_forward(z_g, z_s, MaxReluAsym(0.0)) == 0.0


def test_l2_head_symmetric():
    z_s, z_g = np.array([0.0, 0.0]), np.array([3.0, 4.0])
    assert head_forward(z_s, z_g, SymmetricL2(2.0)) == 10.0
    assert head_forward(z_g, z_s, SymmetricL2(2.0)) == 10.0


def test_grad_examples():
    z_s, z_g = np.array([0.0, 0.0]), np.array([1.0, 2.0])
    g_s, g_g = head_grad(z_s, z_g, SumReluAsym(0.0))
    assert np.array_equal(g_s, [-1.0, -1.0])
    assert np.array_equal(g_g, [1.0, 1.0])
    g_s, g_g = head_grad(z_g, z_s, SumReluAsym(0.0))  # relu inactive
    assert np.array_equal(g_g, [0.0, 0.0])
    g_s, g_g = head_grad(np.array([0.0, 0.0]), np.array([3.0, 4.0]), SymmetricL2(1.0))
    assert np.allclose(g_g, [0.6, 0.8])


def test_max_head_grad_picks_first_argmax():
    z_s, z_g = np.array([0.0, 0.0, 0.0]), np.array([2.0, 2.0, 1.0])
    _, g_g = head_grad(z_s, z_g, MaxReluAsym(0.0))
    assert np.array_equal(g_g, [1.0, 0.0, 0.0])


def test_head_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        head_forward(np.zeros(2), np.zeros(3), SumReluAsym())
    with pytest.raises(DimensionMismatchError):
        head_grad(np.zeros(2), np.zeros(3), SumReluAsym())


def test_head_parameter_validation():
    with pytest.raises(ValueError):
        SumReluAsym(-0.1)
    with pytest.raises(ValueError):
        MaxReluAsym(-0.1)
    with pytest.raises(ValueError):
        SymmetricL2(0.0)


@pytest.mark.parametrize("head", HEADS, ids=str)
def test_quasimetric_axioms_on_random_triples(head):
    rng = np.random.default_rng(0)
    for dim in (1, 2, 8):
        x = rng.normal(size=(2000, dim))
        y = rng.normal(size=(2000, dim))
        z = rng.normal(size=(2000, dim))
        d_xz = head_forward(x, z, head)
        d_xy = head_forward(x, y, head)
        d_yz = head_forward(y, z, head)
        assert np.all(d_xz >= 0.0)
        assert np.all(d_xz <= d_xy + d_yz + 1e-9)
        assert np.all(head_forward(x, x, head) == 0.0)


def test_identity_of_indiscernibles_requires_positive_epsilon():
    z_s, z_g = np.array([1.0, 1.0]), np.array([0.0, 0.0])
    assert head_forward(z_s, z_g, SumReluAsym(0.0)) == 0.0  # distinct, energy 0
    assert head_forward(z_s, z_g, SumReluAsym(0.01)) > 0.0


@pytest.mark.parametrize("head", HEADS, ids=str)
def test_translation_invariance(head):
    rng = np.random.default_rng(1)
    z_s, z_g, t = rng.normal(size=3 * 4).reshape(3, 4)
    assert head_forward(z_s + t, z_g + t, head) == pytest.approx(
        head_forward(z_s, z_g, head), abs=1e-12
    )


@pytest.mark.parametrize("head", HEADS, ids=str)
def test_grad_check_per_head(head):
    m = EnergyModel(EmbeddingTable.init_uniform(4, 6, seed=0), head)
    assert grad_check(m, probes=50, fd_step=1e-5, seed=3) <= 1e-5


def test_energy_matrix_matches_model_energy():
    m = EnergyModel(EmbeddingTable.init_uniform(5, 3, seed=2), SumReluAsym(0.01))
    mat = energy_matrix(m)
    for i in range(5):
        for j in range(5):
            assert mat[i, j] == model_energy(m, i, j)
    assert np.all(np.diag(mat) == 0.0)


@pytest.mark.parametrize(
    "head", [SumReluAsym(0.25), MaxReluAsym(0.5), SymmetricL2(1.5)], ids=str
)
def test_checkpoint_round_trip_is_bit_exact(head):
    m = EnergyModel(EmbeddingTable.init_uniform(6, 4, seed=9), head)
    text = serialize_model(m)
    again = parse_model(text)
    assert again.head == m.head
    assert np.array_equal(again.embeddings.vectors, m.embeddings.vectors)
    assert serialize_model(again) == text


def test_parse_model_rejects_garbage():
    with pytest.raises(ParseError):
        parse_model("nope")
    with pytest.raises(ParseError):
        parse_model('{"dim": 2, "head": {"variant": "mystery"}, "vectors": []}')
    with pytest.raises(ParseError):
        parse_model('{"dim": 2, "head": {"variant": "symmetric_l2", "scale": 1}, "vectors": [[1.0, 2.0, 3.0]]}')


def test_max_head_represents_a_directed_cycle():
    # u_j(i) = (i - j) mod n makes max-relu reproduce the one-way ring's
    # energies exactly; the sum head cannot, because its antisymmetric part
    # is always a potential difference and directed cycles have none
    n = 5
    vecs = np.array([[(i - j) % n for j in range(n)] for i in range(n)], dtype=np.float64)
    m = EnergyModel(EmbeddingTable(vecs), MaxReluAsym(0.0))
    mat = energy_matrix(m)
    for i in range(n):
        for j in range(n):
            assert mat[i, j] == (j - i) % n


def test_sum_head_antisymmetric_part_is_a_potential_difference():
    rng = np.random.default_rng(4)
    z = rng.normal(size=(6, 3))
    head = SumReluAsym(0.3)
    # d(x,y) - d(y,x) = phi(y) - phi(x) with phi = coordinate sum, so the
    # antisymmetric part telescopes to zero around any cycle
    cyc = [0, 3, 1, 5, 2, 0]
    total = 0.0
    for a, b in zip(cyc, cyc[1:]):
        total += head_forward(z[a], z[b], head) - head_forward(z[b], z[a], head)
    assert total == pytest.approx(0.0, abs=1e-12)
