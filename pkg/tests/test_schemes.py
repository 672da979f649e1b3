from __future__ import annotations

import itertools
import logging

import numpy as np
import pytest

from amorphic import constructions as cons
from amorphic.groups import GroupSpec, SubsetIndicator, difference_counts
from amorphic.pds import latin_types, verify_pds
from amorphic.schemes import (
    AsymmetricClassError,
    CoverageError,
    EmptyClassError,
    IdentityInClassError,
    OverlapError,
    assemble,
    bell,
    drop_empty,
    enumerate_fusions,
    format_partition,
    fuse,
    intersection_numbers,
    intersection_numbers_slow,
    parse_partition,
    srg_parameters_of_class,
    van_dam_check,
    verify_amorphic,
)

Z2_2 = GroupSpec((2, 2))


def singletons(group, elems):
    return [SubsetIndicator.from_elements(group, [e]) for e in elems]


def test_assemble_valid_and_invalid():
    s = assemble(Z2_2, singletons(Z2_2, [(0, 1), (1, 0), (1, 1)]))
    assert s.d == 3 and s.valencies() == [1, 1, 1, 1]
    with pytest.raises(OverlapError):
        assemble(Z2_2, singletons(Z2_2, [(0, 1), (0, 1), (1, 1), (1, 0)]))
    with pytest.raises(CoverageError):
        assemble(Z2_2, singletons(Z2_2, [(0, 1), (1, 0)]))
    with pytest.raises(IdentityInClassError):
        assemble(Z2_2, singletons(Z2_2, [(0, 0), (0, 1), (1, 0), (1, 1)]))
    Z4 = GroupSpec((4,))
    with pytest.raises(AsymmetricClassError):
        assemble(Z4, singletons(Z4, [(1,), (2,), (3,)]))
    with pytest.raises(EmptyClassError):
        assemble(Z2_2, [SubsetIndicator.empty(Z2_2)] + singletons(Z2_2, [(0, 1), (1, 0), (1, 1)]))


def test_drop_empty_warns(caplog):
    parts = [SubsetIndicator.empty(Z2_2)] + singletons(Z2_2, [(0, 1)])
    with caplog.at_level(logging.WARNING):
        kept = drop_empty(parts, ["A", "B"])
    assert len(kept) == 1 and "A" in caplog.text


def test_trivial_scheme_intersection_numbers():
    G = GroupSpec((3, 3))
    s = assemble(G, [SubsetIndicator.everything(G).without_identity()])
    chk = intersection_numbers(s)
    assert chk.ok and chk.numbers[1][1][1] == G.order - 2
    assert chk.numbers[1][1][0] == G.order - 1


def test_four_class_intersection_numbers(four_class2):
    s = four_class2.scheme
    chk = intersection_numbers(s)
    assert chk.ok
    p = chk.numbers
    assert p.consistency_holds()
    for i, j, k in itertools.product(range(s.d + 1), repeat=3):
        assert p[i][j][k] == p[j][i][k]
    for i, j in itertools.product(range(s.d + 1), repeat=2):
        assert p[i][j][0] == (p.valencies[i] if i == j else 0)
    for k, S in enumerate(s.classes, start=1):
        assert p[k][k][k] == verify_pds(S).params.lam
        assert p[k][k][k] == difference_counts(S)[S.ranks()[0]]


def test_slow_axiom_checker_agrees(four_class2):
    s = four_class2.scheme
    p = intersection_numbers(s).numbers
    rng = np.random.default_rng(1)
    pairs = [tuple(int(v) for v in rng.integers(0, 256, 2)) for _ in range(12)]
    for (i, j, k), seen in intersection_numbers_slow(s, pairs).items():
        assert seen == {int(p[i][j][k])}


def test_mutation_gives_witness(four_class2):
    s = four_class2.scheme
    a = s.classes[1].ranks()[0]
    neg_a = s.group.negation[a]
    assert neg_a == a  # elementary abelian 2-group
    classes = list(s.classes)
    moved = SubsetIndicator.from_ranks(s.group, [a])
    classes[1] = classes[1] - moved
    classes[2] = classes[2] | moved
    chk = intersection_numbers(assemble(s.group, classes))
    assert not chk.ok and chk.witness["count"] != chk.witness["expected"]


@pytest.mark.parametrize("d,n", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
def test_enumerate_fusions_counts(d, n):
    parts = list(enumerate_fusions(d))
    assert len(parts) == n == bell(d)
    assert len({tuple(map(tuple, p)) for p in parts}) == n


def test_fusion_cap():
    with pytest.raises(ValueError):
        list(enumerate_fusions(9))


def test_partition_text_roundtrip():
    p = parse_partition("1|2,3,4")
    assert p == ((1,), (2, 3, 4))
    assert parse_partition(format_partition(p)) == p
    with pytest.raises(ValueError):
        parse_partition("1|x")


def test_fuse(four_class2):
    s = four_class2.scheme
    assert fuse(s, ((1,), (2,), (3,), (4,))) == s
    one = fuse(s, ((1, 2, 3, 4),))
    assert one.d == 1 and len(one.classes[0]) == 255
    two = fuse(s, parse_partition("1|2,3,4"))
    assert verify_pds(two.classes[0]).params.as_tuple() == (256, 51, 2, 12)
    with pytest.raises(ValueError):
        fuse(s, ((1, 2), (2, 3, 4)))


def test_fusion_functoriality(four_class2):
    s = four_class2.scheme
    step = fuse(fuse(s, ((1,), (2, 3), (4,))), ((1, 3), (2,)))
    assert step.same_partition(fuse(s, ((1, 4), (2, 3))))


def test_two_class_scheme_is_amorphic():
    s = cons.cyclotomic_scheme(3, 2, 2).scheme
    cert = verify_amorphic(s)
    assert cert.amorphic and len(cert.results) == 2


def test_four_class_amorphic(four_class2):
    cert = verify_amorphic(four_class2.scheme)
    assert cert.amorphic and cert.passed == 15


def test_cyclotomic_q8_e7_not_amorphic():
    cert = verify_amorphic(cons.cyclotomic_scheme(2, 3, 7).scheme)
    assert not cert.amorphic
    bad = cert.first_failure()
    assert bad is not None and bad.witness["count"] != bad.witness["expected"]


def test_van_dam(four_class2, rotation3):
    rep = van_dam_check(four_class2.group, four_class2.scheme.classes)
    assert rep.applicable and rep.epsilon == -1
    rep = van_dam_check(rotation3.group, rotation3.scheme.classes)
    assert rep.applicable and rep.epsilon == -1


def test_van_dam_not_applicable_when_a_class_has_no_latin_type():
    c = cons.cyclotomic_scheme(2, 3, 7)  # v = 8 is not a square
    rep = van_dam_check(c.group, c.scheme.classes)
    assert not rep.applicable and "not applicable" in rep.message


def test_van_dam_uses_a_common_sign_for_ambiguous_parameters():
    # (9,4,1,2) reads as both (-1,3,1) and (+1,3,2); (9,2,1,0) only as (+1,3,1)
    G = GroupSpec((3, 3))
    line = lambda v: SubsetIndicator.from_elements(G, [v, G.neg(v)])
    classes = [line((1, 0)), line((0, 1)), line((1, 1)) | line((1, 2))]
    assert {t.epsilon for t in latin_types(verify_pds(classes[2]).params)} == {-1, 1}
    rep = van_dam_check(G, classes)
    assert rep.applicable and rep.epsilon == 1
    assert verify_amorphic(assemble(G, classes)).amorphic


def test_srg_parameters_of_class(four_class2, lifted2):
    assert srg_parameters_of_class(four_class2.scheme, 1).as_tuple() == (256, 51, 2, 12)
    assert srg_parameters_of_class(lifted2.scheme, 2).as_tuple() == (256, 68, 12, 20)
    G = GroupSpec((2, 2, 2))
    trivial = assemble(G, [SubsetIndicator.everything(G).without_identity()])
    assert srg_parameters_of_class(trivial, 1).as_tuple() == (8, 7, 6, 0)


def test_agreement_on_constructed_schemes(four_class2, lifted2):
    for c in (four_class2, lifted2, cons.chain_scheme(2, 2, 2, (2, 1), "hyperbolic")):
        assert verify_amorphic(c.scheme).amorphic == van_dam_check(c.group, c.scheme.classes).applicable
