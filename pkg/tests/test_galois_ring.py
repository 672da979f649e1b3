from __future__ import annotations

import itertools
import random

import pytest

from amorphic import galois_ring as gr
from amorphic.cyclotomic import CyclotomicInt
from amorphic.groups import character_value

R = gr.elements()


def test_ring_arithmetic():
    for x in R:
        assert gr.ONE * x == x
        assert 2 * (2 * x) == gr.ZERO
    xi3 = gr.XI ** 3
    assert xi3 == gr.ONE
    assert gr.pi_reduction(xi3) == 1
    assert gr.XI * gr.XI + gr.XI + gr.ONE == gr.ZERO


def test_ring_axioms_exhaustive():
    for x, y in itertools.product(R, R):
        assert x * y == y * x
        for z in R[::5]:
            assert x * (y + z) == x * y + x * z


def test_two_adic_decompose():
    assert gr.two_adic_decompose(gr.ZERO) == (gr.ZERO, gr.ZERO)
    assert gr.two_adic_decompose(gr.RingElement(2, 0)) == (gr.ZERO, gr.ONE)
    seen = set()
    for x in R:
        b1, b2 = gr.two_adic_decompose(x)
        assert b1 in gr.TEICHMULLER and b2 in gr.TEICHMULLER
        assert b1 + 2 * b2 == x
        seen.add((b1, b2))
    assert len(seen) == 16


def test_frobenius():
    assert gr.frobenius(gr.ZERO) == gr.ZERO
    assert gr.frobenius(gr.ONE) == gr.ONE
    for x in R:
        assert gr.frobenius(gr.frobenius(x)) == x
    for x, y in itertools.product(R, R):
        assert gr.frobenius(x + y) == gr.frobenius(x) + gr.frobenius(y)
        assert gr.frobenius(x * y) == gr.frobenius(x) * gr.frobenius(y)


def test_trace():
    F = gr.field4()
    assert gr.trace_Tr(gr.ZERO) == 0
    for b in R:
        assert gr.trace_Tr(2 * b) == (2 * gr.trace_Tr(b)) % 4
        # tr(pi(x)) = pi(Tr(x))
        assert F.trace(gr.pi_reduction(b), 1) == gr.trace_Tr(b) % 2


def test_reduction():
    assert gr.pi_reduction(gr.RingElement(2, 0)) == 0
    assert gr.pi_reduction(gr.XI) == 2  # alpha
    for b in R:
        b1, _ = gr.two_adic_decompose(b)
        assert gr.pi_reduction(b) == gr.pi_reduction(b1)


def test_lift_F():
    head, tail = gr.lift_F((0, 0, 0, 0))
    assert head == gr.ZERO and tail == (0, 0)
    head, tail = gr.lift_F((2, 1, 0, 0))
    assert head == gr.XI + 2 * gr.ONE and tail == (0, 0)
    images = set()
    for x in itertools.product(range(4), repeat=4):
        h, t = gr.lift_F(x)
        assert gr.unlift_F_inv(h, t) == x
        images.add((h, t))
    assert len(images) == 256


def test_ring_characters():
    for x in R:
        assert gr.ring_character(gr.ZERO, x) == 1
    for x in R:
        val = gr.ring_character(gr.RingElement(2, 0), x)
        assert val == 1 or val == -1
    for b in R:
        if b == gr.ZERO:
            continue
        total = CyclotomicInt.integer(4, 0)
        for x in R:
            total = total + gr.ring_character(b, x)
        assert total == 0


def test_group_bridge_additive():
    G = gr.ring_group()
    assert gr.ring_to_group(gr.ZERO) == G.identity()
    for x, y in itertools.product(R, R):
        assert gr.ring_to_group(x + y) == G.add(gr.ring_to_group(x), gr.ring_to_group(y))
        assert gr.group_to_ring(gr.ring_to_group(x)) == x


def test_character_correspondence():
    G = gr.product_group(2)
    rng = random.Random(7)
    for _ in range(10):
        beta = rng.choice(R)
        w = tuple(rng.randrange(4) for _ in range(2))
        label = gr.character_label(beta, w)
        for _ in range(20):
            head = rng.choice(R)
            tail = tuple(rng.randrange(4) for _ in range(2))
            g = gr.product_to_group(head, tail)
            assert gr.group_to_product(g) == (head, tail)
            assert character_value(G, label, g) == gr.product_character(beta, w, head, tail)


def test_product_group_shape():
    assert gr.product_group(2).factors == (4, 4, 2, 2, 2, 2)
    with pytest.raises(ValueError):
        gr.product_group(0)
