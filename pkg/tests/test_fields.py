from __future__ import annotations

import numpy as np
import pytest

from amorphic.fields import FieldError, FieldSpec, is_irreducible, prime_power, trace_zero_elements


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81])
def test_field_axioms(q):
    F = FieldSpec.of_order(q)
    xs = np.arange(q)
    assert np.array_equal(F.mul_table[xs, 1], xs)
    assert np.array_equal(F.add_table[xs, 0], xs)
    for x in range(1, q):
        assert F.mul(x, F.inv(x)) == 1
    assert F.multiplicative_order(F.primitive_element) == q - 1
    # distributivity on a sample
    rng = np.random.default_rng(q)
    a, b, c = rng.integers(0, q, size=(3, 50))
    assert np.array_equal(F.mul_table[a, F.add_table[b, c]], F.add_table[F.mul_table[a, b], F.mul_table[a, c]])


def test_f4_alpha():
    F = FieldSpec.of_order(4)
    alpha = 2
    assert F.mul(alpha, alpha) == 3  # alpha^2 = alpha + 1
    assert F.add(alpha, 1) == 3
    assert F.pow(alpha, 3) == 1


def test_modulus_must_be_irreducible():
    assert not is_irreducible((1, 0, 1), 2)  # x^2 + 1 = (x+1)^2
    with pytest.raises(FieldError):
        FieldSpec(2, 2, modulus=(1, 0, 1))
    with pytest.raises(FieldError):
        FieldSpec(3, 2, primitive_element=FieldSpec.of_order(9).from_coeffs((2, 0)))  # -1 has order 2


def test_prime_power():
    assert prime_power(81) == (3, 4)
    with pytest.raises(FieldError):
        prime_power(12)


def _power_sum_trace(F, x, e):
    # x + x^q0 + ... + x^{q0^(e-1)} with q0 = q^(1/e)
    q0 = F.q ** (1 / e)
    q0 = round(q0)
    acc, y = 0, x
    for _ in range(e):
        acc = F.add(acc, y)
        y = F.pow(y, q0)
    return acc


@pytest.mark.parametrize("q,sub", [(4, 1), (16, 1), (16, 2), (9, 1), (81, 2), (64, 2), (64, 3)])
def test_trace_matches_power_sum(q, sub):
    F = FieldSpec.of_order(q)
    e = F.s // sub
    tr = F.trace_table(sub)
    for x in range(q):
        assert tr[x] == _power_sum_trace(F, x, e)
    assert F.trace(0, sub) == 0


def test_trace_f4_alpha():
    assert FieldSpec.of_order(4).trace(2, 1) == 1


def test_trace_transitivity():
    F = FieldSpec.of_order(16)
    to4 = F.trace_table(2)
    to2 = F.trace_table(1)
    sub = F.subfield(2)
    for x in range(16):
        mid = sub.restrict(to4[x])
        assert sub.embed(sub.spec.trace(mid, 1)) == to2[x]


def test_subfield_embedding_is_a_homomorphism():
    F = FieldSpec.of_order(64)
    for d in (1, 2, 3):
        sub = F.subfield(d)
        K = sub.spec
        for a in range(K.q):
            for b in range(K.q):
                assert sub.embed(K.mul(a, b)) == F.mul(sub.embed(a), sub.embed(b))
                assert sub.embed(K.add(a, b)) == F.add(sub.embed(a), sub.embed(b))
        fixed = [x for x in range(F.q) if F.pow(x, K.q) == x]
        assert sorted(int(sub.embed(a)) for a in range(K.q)) == fixed


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_trace_zero_elements(q):
    F = FieldSpec.of_order(q * q)
    listed = sorted(trace_zero_elements(q))
    tr = F.trace_table(prime_power(q)[1])
    assert listed == [x for x in range(q * q) if tr[x] == 0]
    assert len(listed) == q


def test_trace_zero_elements_small_cases():
    assert sorted(trace_zero_elements(2)) == [0, 1]
    F = FieldSpec.of_order(9)
    assert sorted(trace_zero_elements(3)) == sorted([0, F.gen_pow(2), F.gen_pow(6)])


def test_group_bridge():
    F = FieldSpec.of_order(4)
    assert F.as_group_element(0) == (0, 0)
    for a in range(4):
        for b in range(4):
            ga, gb = F.as_group_element(a), F.as_group_element(b)
            assert F.as_group_element(F.add(a, b)) == tuple((x + y) % 2 for x, y in zip(ga, gb))
    G = F.additive_group(4)
    vecs = F.vectors_of_group(4)
    assert len(vecs) == G.order == 256
    for r in (0, 1, 77, 255):
        v = tuple(int(c) for c in vecs[r])
        assert G.rank(F.vector_as_group_element(v)) == r
        assert F.vector_from_group_element(G.unrank(r)) == v
