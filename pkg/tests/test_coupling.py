import random

import pytest
from hypothesis import given, settings, strategies as st

from eaesc import (Fin, IndexMismatch, IndexObstruction, NotEAE, Seq, SpaceShape,
                   ZeroIndexInput, block_diag, block_identity, couple_from_MN, eae_check,
                   eae_construct, eae_verify, fredholm_data, index, invert, perturb_kernel,
                   perturb_witness, sc_construct, sc_extend_blockdiag, sc_verify, shift,
                   witness_compress, witness_from_complemented, witness_power)

from helpers import SEQ1, block_op, complemented_witness, eae_pair, random_witness, shift_block

SHAPES = [
    (SEQ1, SEQ1),
    (SEQ1, SpaceShape.of(Seq(), Fin(2))),
    (SpaceShape.of(Seq(), Fin(1)), SEQ1),
]


@given(st.integers(0, 10_000), st.sampled_from(SHAPES), st.integers(-2, 2))
def test_kernel_and_cokernel_transfer_between_products(seed, shapes, k):
    rng = random.Random(seed)
    w = random_witness(rng, *shapes, k)
    p, q = fredholm_data(w.product()), fredholm_data(w.dual_product())
    assert (p.alpha, p.beta) == (q.alpha, q.beta)
    assert w.index() == k


@given(st.integers(0, 10_000), st.integers(-2, 2), st.integers(0, 4))
def test_perturb_kernel_hits_target(seed, k, extra):
    rng = random.Random(seed)
    t = block_op(rng, SpaceShape.of(Seq(), Fin(1)), k)
    m = max(k, 0) + extra
    d = fredholm_data(t + perturb_kernel(t, m))
    assert (d.alpha, d.index) == (m, k)


def test_perturb_kernel_below_index():
    with pytest.raises(IndexObstruction):
        perturb_kernel(shift(-3), 2)


@given(st.integers(0, 10_000), st.sampled_from([-2, -1, 1, 2]), st.integers(0, 3))
def test_perturb_witness_kernel(seed, k, extra):
    rng = random.Random(seed)
    w = random_witness(rng, SEQ1, SpaceShape.of(Seq(), Fin(1)), k)
    m = max(k, 0) + extra
    w2 = perturb_witness(w, m)
    d = fredholm_data(w2.product())
    assert (d.alpha, d.index) == (m, k)
    assert w2.x_shape == w.x_shape and w2.y_shape == w.y_shape


def test_perturb_witness_errors():
    w = witness_from_complemented(shift(-2))
    with pytest.raises(IndexObstruction):
        perturb_witness(w, 1)
    with pytest.raises(ZeroIndexInput):
        perturb_witness(witness_from_complemented(shift(0)), 1)


@settings(max_examples=25)
@given(st.integers(0, 10_000), st.sampled_from(SHAPES), st.integers(-3, 3))
def test_sc_construct_verifies(seed, shapes, k):
    rng = random.Random(seed)
    x, y = shapes
    u, v = eae_pair(rng, x, y, k)
    w = complemented_witness(x, y, shift_block(x, k), shift_block(y, k))
    couple = sc_construct(w, u, v)
    assert sc_verify(u, v, couple, 50)


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.sampled_from(SHAPES), st.integers(-2, 2))
def test_eae_construct_verifies(seed, shapes, k):
    rng = random.Random(seed)
    u, v = eae_pair(rng, *shapes, k)
    ext = eae_construct(u, v)
    assert eae_verify(u, v, ext, 50)


def test_sc_construct_rejects_mismatched_pairs():
    u = block_diag(shift(-1))
    v = u + perturb_kernel(u, 2)
    assert not eae_check(fredholm_data(u), fredholm_data(v))
    with pytest.raises(NotEAE):
        sc_construct(witness_from_complemented(shift(-1)), u, v)
    with pytest.raises(IndexMismatch):
        sc_construct(None, u, u)
    with pytest.raises(IndexMismatch):
        sc_construct(witness_from_complemented(shift(-2)), u, u)


def test_sc_verify_detects_tampering():
    u = block_diag(shift(-1))
    couple = sc_construct(witness_from_complemented(u), u, u)
    bad = type(couple)(couple.a, couple.a_inv, couple.b + block_identity(SEQ1),
                       couple.c, couple.d, couple.d_inv)
    assert not sc_verify(u, u, bad, 20)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("m", [-3, -2, -1, 1, 2, 3])
def test_witness_power_index(k, m):
    w = witness_from_complemented(shift(-k), SpaceShape.of(Fin(1)))
    p = witness_power(w, m)
    assert p.index() == k * m
    assert p.x_shape == w.x_shape


def test_witness_power_zero():
    w = witness_from_complemented(shift(-1))
    assert witness_power(w, 0).index() == 0


def test_couple_from_mn_identity_case():
    w = witness_from_complemented(shift(0))
    ident = block_identity(SEQ1)
    couple = couple_from_MN(ident, ident, w)
    u = w.product()
    assert sc_verify(u, w.dual_product(), couple, 10)


def test_extend_blockdiag_keeps_identities():
    u = block_diag(shift(-1))
    couple = sc_construct(witness_from_complemented(u), u, u)
    fin = SpaceShape.of(Fin(2))
    big = sc_extend_blockdiag(couple, fin, fin)
    uu = block_diag(block_identity(fin), u)
    assert sc_verify(uu, uu, big, 20)


@given(st.integers(0, 10_000), st.sampled_from([-2, -1, 1, 2]))
def test_witness_compress_keeps_index(seed, k):
    rng = random.Random(seed)
    x, y = SEQ1, SpaceShape.of(Seq(), Fin(1))
    u, v = eae_pair(rng, x, y, k)
    w = random_witness(rng, x, y, k)
    comp = witness_compress(w, u, v)
    assert comp.index == k
    assert all(e.symbol.is_zero for row in comp.discrepancy.entries for e in row)


def test_invert_rejects_nonzero_index():
    with pytest.raises(Exception):
        invert(block_diag(shift(-1)))
    assert index(block_diag(shift(-1))) == 1
