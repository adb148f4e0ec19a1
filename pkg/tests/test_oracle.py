import itertools

import pytest

from csiso import oracle
from csiso.catalog import catalog, relabeled
from csiso.perm import from_cycles, identity, inv, mul
from csiso.permgroup import PermGroup

CAT = catalog()


def test_automorphism_counts():
    assert len(oracle.all_automorphisms(CAT["C2"])) == 1
    assert len(oracle.all_automorphisms(CAT["S3"])) == 6
    assert len(oracle.all_automorphisms(CAT["Q8"])) == 24


def test_simple_group_series_fixes_everything():
    for name in ("C2", "C3", "C5", "C7", "C11", "C13"):
        G = CAT[name]
        assert oracle.aut_fixing_series(G, [range(G.order), [0]]) == oracle.all_automorphisms(G)


def test_matching_series_contains_identity():
    G = CAT["D4"]
    terms = [range(8), [0, 1, 2, 3], [0, 2], [0]]
    assert identity(8) in oracle.iso_matching_series(G, terms, G, terms)


def test_brute_stabilizer_example():
    C4 = PermGroup([from_cycles(4, (0, 1, 2, 3))])
    assert oracle.brute_set_stabilizer(C4, {0, 2}) == sorted([identity(4), from_cycles(4, (0, 2), (1, 3))])


@pytest.mark.parametrize("name", sorted(n for n in CAT if CAT[n].order <= 12))
def test_automorphisms_form_a_group(name):
    G = CAT[name]
    auts = oracle.all_automorphisms(G)
    s = set(auts)
    assert len(s) == len(auts)
    assert all(oracle.is_automorphism(G, f) for f in auts)
    assert all(mul(a, b) in s for a, b in itertools.product(auts, repeat=2))
    assert all(inv(a) in s for a in auts)


def test_isomorphisms_form_a_coset():
    G = CAT["D6"]
    G2, f = relabeled(G, seed=3)
    isos = oracle.all_isomorphisms(G, G2)
    auts = oracle.all_automorphisms(G)
    assert len(isos) == len(auts) and tuple(f) in isos
    assert sorted(mul(a, isos[0]) for a in auts) == sorted(isos)


def test_no_isomorphism_between_different_groups():
    assert oracle.all_isomorphisms(CAT["C4"], CAT["C2xC2"]) == []
    assert oracle.all_isomorphisms(CAT["D4"], CAT["Q8"]) == []
    assert oracle.all_isomorphisms(CAT["C6"], CAT["S3"]) == []


def test_simple_groups_have_small_automorphism_groups():
    for name, G in CAT.items():
        subs = oracle.all_subgroups(G)
        normal = [N for N in subs if oracle._normal_in(G, frozenset(range(G.order)), N)]
        if len(normal) == 2:
            assert len(oracle.all_automorphisms(G)) <= G.order ** 2


def test_subgroup_and_series_counts():
    assert len(oracle.all_subgroups(CAT["S3"])) == 6
    assert len(oracle.all_subgroups(CAT["Q8"])) == 6
    assert len(oracle.composition_series_brute(CAT["C2xC2"])) == 3
    assert len(oracle.composition_series_brute(CAT["C8"])) == 1
