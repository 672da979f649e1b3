from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from amorphic.cyclotomic import CyclotomicInt
from amorphic.groups import (
    GroupMismatchError,
    GroupSpec,
    SubsetIndicator,
    all_character_sums,
    character_sum,
    character_value,
    convolve,
    difference_counts,
)

MIXED = GroupSpec((4, 4, 2, 2, 2, 2))


def test_rank_roundtrip_small():
    G = GroupSpec((4, 2))
    assert G.unrank(0) == (0, 0)
    for r in range(G.order):
        assert G.rank(G.unrank(r)) == r
    assert G.unrank(G.rank((1, 1))) == (1, 1)


def test_rank_roundtrip_mixed():
    seen = {MIXED.rank(MIXED.unrank(r)) for r in range(MIXED.order)}
    assert seen == set(range(256))
    assert not MIXED.is_elementary_abelian()
    assert MIXED.exponent == 4


def test_rejects_bad_factors():
    with pytest.raises(ValueError):
        GroupSpec((1, 2))
    with pytest.raises(ValueError):
        GroupSpec((2,) * 21)


def test_translation_and_negation():
    G = GroupSpec((3, 4))
    for g in range(G.order):
        t = G.translation(g)
        for y in range(G.order):
            assert G.unrank(int(t[y])) == G.add(G.unrank(y), G.unrank(g))
        assert G.unrank(int(G.negation[g])) == G.neg(G.unrank(g))


def test_characters_basic():
    assert character_value(GroupSpec((5, 3)), (0, 0), (2, 1)) == 1
    assert character_value(GroupSpec((2,)), (1,), (1,)) == -1
    z = character_value(GroupSpec((4,)), (1,), (1,))
    assert list(z.coeffs) == [0, 1]
    assert z**4 == 1


def test_character_sums_trivial_sets():
    G = MIXED
    empty = SubsetIndicator.empty(G)
    full = SubsetIndicator.everything(G)
    sums_full = all_character_sums(full)
    assert sums_full[0] == G.order
    assert all(sums_full[i] == 0 for i in range(1, G.order))
    assert np.all(all_character_sums(empty).coeffs == 0)


def _random_subset(group, seed, density=0.3):
    rng = np.random.default_rng(seed)
    return SubsetIndicator(group, rng.random(group.order) < density)


@pytest.mark.parametrize("factors", [(4, 4, 2, 2, 2, 2), (3, 3, 3), (2, 2, 2, 2, 2), (4, 2, 3), (5, 5), (8, 2)])
def test_fast_transform_matches_per_label_sum(factors):
    G = GroupSpec(factors)
    S = _random_subset(G, sum(factors))
    table = all_character_sums(S)
    slow = all_character_sums(S, fast=False)
    assert np.array_equal(table.coeffs, slow.coeffs)
    for label in range(0, G.order, max(1, G.order // 17)):
        assert table[label] == character_sum(S, G.unrank(label))
    assert table[0] == len(S)


def test_parseval_on_mixed_group():
    S = _random_subset(MIXED, 3)
    norms = all_character_sums(S).norms()
    assert norms.sum() == MIXED.order * len(S)


def test_difference_counts_small_cases():
    G = GroupSpec((4, 2))
    assert not difference_counts(SubsetIndicator.from_elements(G, [(1, 0)])).any()
    a = (1, 1)
    S = SubsetIndicator.from_elements(G, [a, G.neg(a)])
    counts = difference_counts(S)
    two_a = G.rank(G.add(a, a))
    assert counts[two_a] == 2  # 2a = -2a here, so both ordered pairs land on it
    assert counts.sum() == 2


def test_difference_counts_against_double_loop():
    G = GroupSpec((4, 4, 2))
    S = _random_subset(G, 11)
    oracle = np.zeros(G.order, dtype=np.int64)
    for a, b in itertools.permutations(S.elements(), 2):
        oracle[G.rank(G.add(a, G.neg(b)))] += 1
    assert np.array_equal(difference_counts(S), oracle)


def test_convolve_identity_and_singletons():
    G = GroupSpec((2,) * 6)
    B = _random_subset(G, 5)
    ident = SubsetIndicator.from_ranks(G, [0])
    assert np.array_equal(convolve(ident, B), B.bits.astype(np.int64))
    a = SubsetIndicator.from_elements(GroupSpec((4, 4)), [(1, 3)])
    out = convolve(a, a)
    assert out[GroupSpec((4, 4)).rank((2, 2))] == 1 and out.sum() == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_convolve_methods_agree_and_total(seed_a, seed_b):
    G = GroupSpec((2,) * 6)
    A, B = _random_subset(G, seed_a), _random_subset(G, seed_b, 0.5)
    t = convolve(A, B, method="transform")
    d = convolve(A, B, method="direct")
    assert np.array_equal(t, d)
    assert t.sum() == len(A) * len(B)


def test_convolve_rejects_mixed_groups():
    with pytest.raises(GroupMismatchError):
        convolve(SubsetIndicator.empty(GroupSpec((2, 2))), SubsetIndicator.empty(GroupSpec((4,))))


def test_subset_algebra():
    G = GroupSpec((3, 3))
    S = SubsetIndicator.from_elements(G, [(1, 0), (2, 0)])
    assert S.is_symmetric() and not S.contains_identity()
    assert len(S | S.complement()) == 9
    assert len(S & S.complement()) == 0
    assert S.negated() == S
    assert not SubsetIndicator.from_elements(G, [(1, 0)]).is_symmetric()


def test_cyclotomic_character_sum_is_exact():
    # x -> zeta_3^x summed over {1} in Z_3 is a primitive cube root, not an integer
    G = GroupSpec((3,))
    val = character_sum(SubsetIndicator.from_elements(G, [(1,)]), (1,))
    assert val == CyclotomicInt.root(3, 1) and not val.is_integer()
