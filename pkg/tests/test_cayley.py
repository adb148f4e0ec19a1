import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csiso import oracle
from csiso.catalog import catalog, relabeled
from csiso.cayley import (
    CayleyGroup,
    GroupError,
    Subgroup,
    center,
    centralizer,
    cosets,
    direct_product,
    inn_restriction,
    is_characteristically_simple,
    is_normal,
    is_simple,
    make_subgroup,
    minimal_normal_subgroups,
    normal_closure,
    normal_subgroups,
    quotient,
    subgroup_generated,
)

from conftest import Q8_MINUS_ONE, S3_A3

CAT = catalog()
NAMES = sorted(CAT)


def test_subgroup_generated_examples(cat):
    assert subgroup_generated(cat["C4"], [2]).elements == (0, 2)
    # a transposition and a 3-cycle generate S3
    assert subgroup_generated(cat["S3"], [1, 3]).order == 6
    assert subgroup_generated(cat["A4"], []).elements == (0,)


def test_normal_closure_examples(cat):
    assert normal_closure(cat["S3"], [1]).order == 6
    assert normal_closure(cat["Q8"], [Q8_MINUS_ONE]).elements == (0, 2)


def test_centralizer_and_center(cat):
    S3, Q8 = cat["S3"], cat["Q8"]
    assert centralizer(S3, Subgroup(S3, S3_A3)).elements == S3_A3
    assert centralizer(Q8, Q8.whole).elements == (0, 2)
    assert center(Q8.whole).order == 2
    assert center(S3.whole).elements == (0,)
    C6 = cat["C6"]
    assert centralizer(C6, Subgroup(C6, (0, 3))).order == 6


def test_inn_restriction_swaps_three_cycles(cat):
    S3 = cat["S3"]
    A3 = Subgroup(S3, S3_A3)
    assert inn_restriction(S3, A3, 1) == (0, 2, 1)
    assert inn_restriction(S3, A3, 3) == (0, 1, 2)


def test_cosets_examples(cat):
    C4 = cat["C4"]
    cs = cosets(C4, Subgroup(C4, (0, 2)))
    assert cs.blocks == ((0, 2), (1, 3))
    assert cs.coset_of[3] == 1
    assert len(cosets(C4, C4.whole)) == 1
    assert len(cosets(C4, C4.trivial)) == 4


def test_quotient_examples(cat):
    S3 = cat["S3"]
    Q, proj = quotient(S3, Subgroup(S3, S3_A3))
    assert Q.order == 2
    proj.verify()
    assert quotient(S3, S3.whole)[0].order == 1
    assert quotient(S3, S3.trivial)[0].order == 6


def test_direct_product(cat):
    D = direct_product(cat["C2"], cat["C3"])
    assert D.group.order == 6
    assert max(D.group.element_orders) == 6
    assert D.split(D.pair(1, 2)) == (1, 2)
    D.embed1.verify()
    D.embed2.verify()
    V = direct_product(cat["C2"], cat["C2"]).group
    assert V.order == 4 and set(V.element_orders) == {1, 2}
    trivial = CayleyGroup([[0]])
    assert len(oracle.all_isomorphisms(direct_product(cat["S3"], trivial).group, cat["S3"])) == 6


def test_minimal_normals(cat):
    assert [N.elements for N in minimal_normal_subgroups(cat["C2xC2"])] == [(0, 1), (0, 2), (0, 3)]
    assert [N.elements for N in minimal_normal_subgroups(cat["S3"])] == [S3_A3]
    assert is_normal(cat["S3"], Subgroup(cat["S3"], S3_A3))
    assert is_characteristically_simple(cat["C4"]) is None
    assert len(is_characteristically_simple(cat["C3xC3"])) == 2
    assert is_simple(cat["C5"]) and not is_simple(cat["C4"])


def test_malformed_tables_rejected():
    with pytest.raises(GroupError, match="Latin"):
        CayleyGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupError, match="identity"):
        CayleyGroup([[1, 0], [0, 1]])
    with pytest.raises(GroupError):
        CayleyGroup([[0, 1, 2], [1, 2, 0]])
    # Latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    G = CayleyGroup(t)
    with pytest.raises(GroupError, match="associative"):
        G.verify()


def test_make_subgroup_rejects_non_subgroups(cat):
    with pytest.raises(GroupError):
        make_subgroup(cat["S3"], [0, 3])
    with pytest.raises(GroupError):
        make_subgroup(cat["C4"], [0, 9])


def test_normal_subgroups_match_brute_force(cat):
    for name in ("S3", "D4", "Q8", "A4", "C2xC4", "S4"):
        G = cat[name]
        brute = {s for s in oracle.all_subgroups(G)
                 if all(G.conj(h, x) in s for h in s for x in range(G.order))}
        assert {frozenset(N.elements) for N in normal_subgroups(G)} == brute


group_names = st.sampled_from(NAMES)


@settings(max_examples=40, deadline=None)
@given(group_names, st.integers(0, 10**6))
def test_relabeling_preserves_structure(name, seed):
    G = CAT[name]
    G2, f = relabeled(G, seed=seed)
    assert sorted(G.element_orders) == sorted(G2.element_orders)
    assert len(normal_subgroups(G)) == len(normal_subgroups(G2))
    assert np.array_equal(np.asarray(f)[G.table], G2.table[np.ix_(f, f)])


@settings(max_examples=60, deadline=None)
@given(group_names, st.data())
def test_subgroup_closure_and_cosets(name, data):
    G = CAT[name]
    seeds = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    S = subgroup_generated(G, seeds)
    assert S.is_closed() and G.order % S.order == 0
    assert all(x in S for x in seeds)
    cs = cosets(G, S)
    flat = sorted(x for b in cs.blocks for x in b)
    assert flat == list(range(G.order))
    assert all(len(b) == S.order for b in cs.blocks)
    N = normal_closure(G, seeds)
    assert is_normal(G, N) and all(x in N for x in S.elements)
    Q, proj = quotient(G, N)
    assert proj.is_homomorphism() and Q.order == G.order // N.order
    assert proj.kernel().elements == N.elements


@settings(max_examples=40, deadline=None)
@given(group_names, st.data())
def test_centralizer_commutes(name, data):
    G = CAT[name]
    seeds = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    H = subgroup_generated(G, seeds)
    C = centralizer(G, H)
    assert all(G.mul(c, h) == G.mul(h, c) for c in C.elements for h in H.elements)
    outside = [x for x in range(G.order) if x not in C]
    assert all(any(G.mul(x, h) != G.mul(h, x) for h in H.elements) for x in outside)
