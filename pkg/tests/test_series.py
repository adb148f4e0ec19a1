import pytest
from hypothesis import given, settings, strategies as st

from csiso import oracle
from csiso.catalog import catalog, relabeled
from csiso.cayley import GroupError, Subgroup
from csiso.series import (
    IsoResult,
    SeriesSpec,
    borel_group,
    bottom_up_auto,
    characteristic_refinement,
    characteristic_series,
    comp_series_iso,
    enumerate_composition_series,
    first_composition_series,
    full_iso,
    series_count_bound,
    series_from_sets,
    top_down_auto,
    validate_series,
)

from conftest import S3_A3

CAT = catalog()
SMALL = sorted(name for name, G in CAT.items() if G.order <= 12)


def _relabel_spec(spec, seed):
    G2, f = relabeled(spec.group, seed=seed)
    return SeriesSpec(G2, tuple(Subgroup(G2, tuple(sorted(f[x] for x in t.elements))) for t in spec.terms))


def test_validate_series():
    assert validate_series(series_from_sets(CAT["C5"], [[0]])).composition
    assert validate_series(series_from_sets(CAT["C4"], [[0, 2], [0]])).composition
    rep = validate_series(series_from_sets(CAT["S3"], [[0, 1]]))
    assert not rep.ok and "normal" in rep.problem
    rep = validate_series(series_from_sets(CAT["C4"], [[0]]))
    assert rep.ok and not rep.composition


def test_characteristic_series_examples():
    C4 = CAT["C4"]
    ref = characteristic_refinement(series_from_sets(C4, [[0, 2], [0]]))
    assert [t.elements for t in ref.characteristic.terms] == [(0, 1, 2, 3), (0, 2), (0,)]
    assert ref.refined.term_sets() == [(0, 1, 2, 3), (0, 2), (0,)]
    assert [t.order for t in characteristic_series(CAT["S3"]).terms] == [6, 3, 1]
    V = CAT["C2xC2"]
    ref = characteristic_refinement(series_from_sets(V, [[0, 1], [0]]))
    assert [t.order for t in ref.characteristic.terms] == [4, 1]
    assert ref.refined.term_sets() == [(0, 1, 2, 3), (0, 1), (0,)]


@pytest.mark.parametrize("name", sorted(n for n in CAT if CAT[n].order <= 16))
def test_characteristic_series_is_invariant(name):
    G = CAT[name]
    auts = oracle.all_automorphisms(G)
    cs = characteristic_series(G)
    for K in cs.terms:
        s = set(K.elements)
        assert all({f[x] for x in s} == s for f in auts)
    for spec in enumerate_composition_series(G)[:4]:
        ref = characteristic_refinement(spec)
        assert validate_series(ref.refined).composition
        fixing = oracle.aut_fixing_series(G, spec.term_sets())
        assert all({f[x] for x in t.elements} == set(t.elements) for f in fixing for t in ref.refined.terms)


def test_borel_group_on_flag():
    G = CAT["C2xC2xC2"]
    flag = [Subgroup(G, (0, 1)), Subgroup(G, (0, 1, 2, 3))]
    B = borel_group(G, [G.whole] + flag[::-1] + [G.trivial])
    expect = [f for f in oracle.all_automorphisms(G)
              if all({f[x] for x in S.elements} == set(S.elements) for S in flag)]
    assert B.order == len(expect) == 8


def test_bottom_up_examples():
    assert bottom_up_auto(series_from_sets(CAT["S3"], [S3_A3])).order == 6
    assert bottom_up_auto(series_from_sets(CAT["C4"], [[0, 2]])).order == 2
    assert bottom_up_auto(series_from_sets(CAT["C2xC2"], [[0, 1]])).order == 2


def test_top_down_examples():
    assert top_down_auto(series_from_sets(CAT["C4"], [[0, 2]])).order == 2
    spec = series_from_sets(CAT["Q8"], [[0, 1, 2, 3], [0, 2]])
    expect = oracle.aut_fixing_series(CAT["Q8"], spec.term_sets())
    X = top_down_auto(spec)
    assert X.order == len(expect) == 8
    assert all(X.contains(f) for f in expect)


def test_invalid_series_rejected():
    with pytest.raises(GroupError):
        bottom_up_auto(series_from_sets(CAT["C4"], [[0]]))
    with pytest.raises(GroupError):
        comp_series_iso(series_from_sets(CAT["C4"], [[0]]), series_from_sets(CAT["C4"], [[0]]))


def test_engines_agree_on_c2xc4():
    for spec in enumerate_composition_series(CAT["C2xC4"]):
        X = bottom_up_auto(spec, engine="l1")
        assert X == bottom_up_auto(spec, engine="l2") == top_down_auto(spec)


def test_iso_examples():
    S3 = CAT["S3"]
    spec = series_from_sets(S3, [S3_A3])
    same = comp_series_iso(spec, spec)
    assert same.isomorphic and same.autgroup == bottom_up_auto(spec)
    c4 = series_from_sets(CAT["C4"], [[0, 2]])
    v4 = series_from_sets(CAT["C2xC2"], [[0, 1]])
    assert comp_series_iso(c4, v4) == IsoResult(False)
    res = comp_series_iso(spec, _relabel_spec(spec, seed=11))
    assert res.isomorphic and res.solution_count == 6
    res.iso.verify()


def test_iso_mismatched_series_on_same_group():
    # the same group, series through different order-2 subgroups of C2 x C4
    specs = enumerate_composition_series(CAT["C2xC4"])
    a, b = specs[0], specs[-1]
    expect = oracle.iso_matching_series(CAT["C2xC4"], a.term_sets(), CAT["C2xC4"], b.term_sets())
    res = comp_series_iso(a, b)
    assert res.isomorphic == bool(expect)
    if expect:
        assert res.solution_count == len(expect)


def test_enumeration_examples():
    assert len(enumerate_composition_series(CAT["C8"])) == 1
    assert len(enumerate_composition_series(CAT["C9"])) == 1
    assert len(enumerate_composition_series(CAT["C2xC2"])) == 3
    assert [s.term_sets() for s in enumerate_composition_series(CAT["S3"])] == [[tuple(range(6)), S3_A3, (0,)]]
    assert first_composition_series(CAT["D6"]).term_sets() == enumerate_composition_series(CAT["D6"])[0].term_sets()


@pytest.mark.parametrize("name", sorted(n for n in CAT if CAT[n].order <= 16))
def test_enumeration_matches_brute_force(name):
    G = CAT[name]
    got = {tuple(frozenset(t.elements) for t in s.terms) for s in enumerate_composition_series(G)}
    assert got == oracle.composition_series_brute(G)
    assert len(got) <= series_count_bound(G.order)


def test_full_iso_examples():
    assert not full_iso(CAT["C4"], CAT["C2xC2"]).isomorphic
    assert not full_iso(CAT["D4"], CAT["Q8"]).isomorphic
    assert full_iso(CAT["S3"], CAT["S3"]).isomorphic
    res = full_iso(CAT["Dic3"], CAT["C3:C4"])
    assert res.isomorphic
    res.iso.verify()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_solver_outputs_are_series_automorphisms(name, data):
    G = CAT[name]
    specs = enumerate_composition_series(G)
    spec = data.draw(st.sampled_from(specs))
    for X in (bottom_up_auto(spec), top_down_auto(spec)):
        for g in X.gens:
            assert oracle.is_automorphism(G, g)
            assert all({g[x] for x in t.elements} == set(t.elements) for t in spec.terms)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([n for n in SMALL if CAT[n].order <= 6]), st.data())
def test_iso_symmetry(name, data):
    G = CAT[name]
    specs = enumerate_composition_series(G)
    s1 = data.draw(st.sampled_from(specs))
    s2 = _relabel_spec(data.draw(st.sampled_from(specs)), seed=data.draw(st.integers(0, 1000)))
    fwd, back = comp_series_iso(s1, s2), comp_series_iso(s2, s1)
    assert fwd.isomorphic == back.isomorphic
    if fwd.isomorphic:
        assert fwd.solution_count == back.solution_count
        for a, b in zip(s1.terms, s2.terms):
            assert {fwd.iso.image[x] for x in a.elements} == set(b.elements)
