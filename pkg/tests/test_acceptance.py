"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the lines are also
printed under normal capture.
"""

import itertools
import json
import math
import random
import time

import pytest

from csiso import autlift, cli, oracle
from csiso.autlift import (
    AutPair,
    autlifting,
    build_context,
    ker_L1_generators,
    ker_L2_generators,
    l2_condition,
    lift_L1,
    lift_L2,
    satisfies_left_law,
    satisfies_right_law,
    theta,
)
from csiso.catalog import abelian, catalog, cyclic, dihedral, perm_fixtures, relabeled
from csiso.cayley import (
    Subgroup,
    automorphism_list,
    center,
    is_normal,
    normal_subgroups,
    subcayley,
    subgroup_generated,
)
from csiso.io import dumps, group_to_obj
from csiso.permgroup import PermGroup
from csiso.series import (
    SeriesSpec,
    bottom_up_auto,
    comp_series_iso,
    enumerate_composition_series,
    first_composition_series,
    series_count_bound,
    series_from_sets,
    top_down_auto,
)
from csiso.setstab import set_stabilizer

CAT = catalog()


@pytest.fixture
def report(capsys):
    def emit(num, title, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {num} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else ""))
        assert ok, detail
    return emit


def _same_group(X, elems):
    return X.order == len(elems) and all(X.contains(f) for f in elems)


def _instances():
    return [(name, H) for name in sorted(CAT) for H in normal_subgroups(CAT[name])]


def _aut_group(C):
    return PermGroup(automorphism_list(C), C.order)


# 1 ---------------------------------------------------------------------------

def test_c1_auto_matches_oracle(report):
    t0 = time.perf_counter()
    bad, checked = [], 0
    for name in sorted(CAT):
        G = CAT[name]
        for spec in enumerate_composition_series(G):
            want = oracle.aut_fixing_series(G, spec.term_sets())
            for solve in (bottom_up_auto, top_down_auto):
                checked += 1
                if not _same_group(solve(spec), want):
                    bad.append((name, solve.__name__, spec.term_sets()))
    dt = time.perf_counter() - t0
    report(1, "auto vs oracle on every catalog series", not bad and dt < 600,
           f"{checked} runs, {len(bad)} mismatches, {dt:.1f}s")


# 2 ---------------------------------------------------------------------------

def _relabel_spec(spec, seed):
    G2, f = relabeled(spec.group, seed=seed)
    return SeriesSpec(G2, tuple(Subgroup(G2, tuple(sorted(f[x] for x in t.elements))) for t in spec.terms))


def _iso_pairs():
    """Relabelings (with matching and mismatched series) and non-isomorphic pairs.

    Direct products of order 81 and up cost minutes per pair in the
    multiplication-graph cut, so isomorphic pairs stay at order 12 and below.
    """
    pairs = []
    for name in (n for n in sorted(CAT) if CAT[n].order <= 7):
        specs = enumerate_composition_series(CAT[name])
        for seed in (1, 2, 3):
            pairs += [(a, _relabel_spec(b, seed)) for a, b in itertools.product(specs, repeat=2)]
    for name in ("C8", "C2xC4", "C2xC2xC2", "D4", "Q8"):
        specs = enumerate_composition_series(CAT[name])
        for a, seed in zip(specs[:2], (7, 8)):
            pairs += [(a, _relabel_spec(b, seed)) for b in specs[:4]]
    for name in ("C9", "C10", "D5", "D6"):
        spec = first_composition_series(CAT[name])
        pairs.append((spec, _relabel_spec(spec, 5)))
    by_order = {}
    for name in sorted(CAT):
        if CAT[name].order <= 12:
            by_order.setdefault(CAT[name].order, []).append(name)
    for names in by_order.values():
        for a, b in itertools.combinations(names, 2):
            pairs.append((first_composition_series(CAT[a]), first_composition_series(CAT[b])))
    return pairs


def test_c2_iso_matches_oracle(report):
    t0 = time.perf_counter()
    pairs = _iso_pairs()
    bad = []
    kinds = {"isomorphic": 0, "not": 0}
    for s1, s2 in pairs:
        want = oracle.iso_matching_series(s1.group, s1.term_sets(), s2.group, s2.term_sets())
        got = comp_series_iso(s1, s2)
        kinds["isomorphic" if want else "not"] += 1
        if got.isomorphic != bool(want) or (want and (got.solution_count != len(want)
                                                      or tuple(got.iso.image) not in want)):
            bad.append((s1.group.name, s2.group.name))
    dt = time.perf_counter() - t0
    report(2, "series isomorphism vs oracle", not bad and len(pairs) >= 100 and dt < 600,
           f"{len(pairs)} pairs ({kinds['isomorphic']} isomorphic), {len(bad)} mismatches, {dt:.1f}s")


# 3 ---------------------------------------------------------------------------

def test_c3_set_stabilizer_exhaustive(report):
    t0 = time.perf_counter()
    bad, checked = [], 0
    for name, G in sorted(perm_fixtures().items()):
        elems = oracle.perm_closure(G.gens, G.degree)
        for k in range(G.degree + 1):
            for delta in itertools.combinations(range(G.degree), k):
                d = set(delta)
                want = [g for g in elems if {g[x] for x in d} == d]
                checked += 1
                if not _same_group(set_stabilizer(G, delta), want):
                    bad.append((name, delta))
    dt = time.perf_counter() - t0
    report(3, "set stabilizer on every subset", not bad and dt < 300,
           f"{checked} subsets over {len(perm_fixtures())} groups, {len(bad)} mismatches, {dt:.1f}s")


# 4 ---------------------------------------------------------------------------

def test_c4_kernel_identities(report):
    bad = []
    insts = _instances()
    for name, H in insts:
        G = CAT[name]
        ctx = build_context(G, H)
        q = G.order // H.order
        k1 = PermGroup(ker_L1_generators(ctx), G.order).order
        k2 = PermGroup(ker_L2_generators(ctx), G.order).order
        if k1 != H.order ** (q - 1) or k2 != center(H).order ** (q - 1):
            bad.append((name, H.elements, k1, k2))
    report(4, "kernel orders", not bad, f"{len(insts)} normal pairs, {len(bad)} mismatches")


# 5 ---------------------------------------------------------------------------

def test_c5_lift_round_trips(report):
    rng = random.Random(20240607)
    insts = [(n, H) for n, H in _instances() if H.order > 1 and H.order < CAT[n].order]
    cache = {}
    bad, l2_checked = [], 0
    for _ in range(1000):
        name, H = insts[rng.randrange(len(insts))]
        key = (name, H.elements)
        if key not in cache:
            ctx = build_context(CAT[name], H)
            cache[key] = (ctx, automorphism_list(ctx.Q), automorphism_list(subcayley(H)))
        ctx, qa, ha = cache[key]
        pair = AutPair(qa[rng.randrange(len(qa))], ha[rng.randrange(len(ha))])
        g = lift_L1(ctx, pair)
        ok = theta(ctx, g) == pair and satisfies_left_law(ctx, g)
        if l2_condition(ctx, pair):
            l2_checked += 1
            g = lift_L2(ctx, pair)
            ok = ok and theta(ctx, g) == pair and satisfies_left_law(ctx, g) and satisfies_right_law(ctx, g)
        if not ok:
            bad.append((key, pair))
    report(5, "lift round trips and laws", not bad,
           f"1000 pairs over {len(cache)} instances, {l2_checked} with two-sided lifts, {len(bad)} failures")


# 6 ---------------------------------------------------------------------------

def _power(G, x, k):
    y = 0
    for _ in range(k):
        y = G.mul(y, x)
    return y


def _smallest_prime(n):
    return next(p for p in range(2, n + 1) if n % p == 0)


def fixed_series(G):
    """A composition series built upward, joining the least usable element each time."""
    chain = [G.trivial]
    while chain[-1].order < G.order:
        N = chain[-1]
        for x in range(G.order):
            if x in N:
                continue
            k, y = 1, x
            while y not in N:
                y, k = G.mul(y, x), k + 1
            p = _smallest_prime(k)
            x = _power(G, x, k // p)
            K = subgroup_generated(G, list(N.elements) + [x])
            if K.order == N.order * p and is_normal(G, K):
                chain.append(K)
                break
    return series_from_sets(G, [K.elements for K in reversed(chain[:-1])])


def _factor(n):
    out, p = {}, 2
    while n > 1:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    return out


def abelian_aut_order(ns):
    """Order of Aut(C_n1 x ... x C_nk), from the exponents of each primary part."""
    parts = {}
    for n in ns:
        for p, e in _factor(n).items():
            parts.setdefault(p, []).append(e)
    total = 1
    for p, es in parts.items():
        es = sorted(es)
        k = len(es)
        for j, e in enumerate(es, start=1):
            d = max(l for l in range(1, k + 1) if es[l - 1] == e)
            c = min(l for l in range(1, k + 1) if es[l - 1] == e)
            total *= (p ** d - p ** (j - 1)) * p ** (e * (k - d)) * p ** ((e - 1) * (k - c + 1))
    return total


def _euler_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def _scale_family():
    fam = []
    for n in range(3, 33):
        fam.append((dihedral(n), n * _euler_phi(n)))
    for p, top in ((2, 6), (3, 3), (5, 2), (7, 2)):
        for e in range(1, top + 1):
            for part in _partitions(e):
                ns = [p ** a for a in part]
                fam.append((abelian(*ns) if len(ns) > 1 else cyclic(ns[0]), abelian_aut_order(ns)))
    for ns in ((12,), (30,), (36,), (48,), (60,), (2, 6), (2, 2, 6), (3, 6), (2, 12), (6, 6), (2, 2, 2, 6)):
        fam.append((abelian(*ns) if len(ns) > 1 else cyclic(ns[0]), abelian_aut_order(ns)))
    return fam


def test_c6_soundness_at_scale(report):
    # the closed-form bounds first agree with brute force where that is cheap
    spot = [((2, 2), 6), ((2, 4), 8), ((2, 2, 2), 168), ((4, 4), 96), ((3, 3), 48), ((2, 6), 12), ((9,), 6)]
    spot_ok = all(abelian_aut_order(ns) == want for ns, want in spot)
    for ns in ((2, 2), (2, 4), (2, 2, 2), (3, 3), (4, 4), (2, 8)):
        spot_ok &= len(oracle.all_automorphisms(abelian(*ns))) == abelian_aut_order(ns)
    for n in (3, 4, 5, 6, 8):
        spot_ok &= len(oracle.all_automorphisms(dihedral(n))) == n * _euler_phi(n)
    t0 = time.perf_counter()
    bad, fam = [], _scale_family()
    for G, bound in fam:
        spec = fixed_series(G)
        X = bottom_up_auto(spec)
        ok = bound % X.order == 0
        for g in X.strong_generators:
            ok &= oracle.is_automorphism(G, g)
            ok &= all({g[x] for x in t.elements} == set(t.elements) for t in spec.terms)
        if not ok:
            bad.append(G.name)
    dt = time.perf_counter() - t0
    report(6, "soundness on dihedral and abelian groups to order 64", spot_ok and not bad,
           f"{len(fam)} groups, bound spot checks {'ok' if spot_ok else 'FAILED'}, {len(bad)} failures, {dt:.1f}s")


# 7 ---------------------------------------------------------------------------

def test_c7_series_count_bound(report):
    counts = {name: len(enumerate_composition_series(G)) for name, G in CAT.items()}
    bad = [n for n, c in counts.items() if c > series_count_bound(CAT[n].order)]
    most = max(counts, key=counts.get)
    report(7, "composition-series count bound", not bad,
           f"{len(counts)} groups, most series: {most} with {counts[most]} "
           f"(bound {series_count_bound(CAT[most].order):.0f})")


# 8 ---------------------------------------------------------------------------

def _time_auto(tmp_path, n, repeats=3):
    G = dihedral(n)
    gp = tmp_path / f"D{n}.json"
    gp.write_text(dumps(group_to_obj(G)))
    sp = tmp_path / f"D{n}_series.json"
    sp.write_text(json.dumps({"series": [list(t.elements) for t in fixed_series(G).terms[1:]]}))
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = cli.cmd_auto(cli.build_parser().parse_args(["auto", str(gp), str(sp)]))
        best = min(best, time.perf_counter() - t0)
    assert int(out["order"]) == n * _euler_phi(n)
    return best


def test_c8_scaling(report, tmp_path, monkeypatch):
    sizes = [8, 16, 32]
    times = [_time_auto(tmp_path, n) for n in sizes]
    slopes = [math.log(t2 / t1) / math.log(2) for t1, t2 in zip(times, times[1:])]
    # share of one run spent cutting lifted groups down to automorphisms
    spent = []
    inner = autlift.step5_cut_to_aut

    def timed(*a, **k):
        t0 = time.perf_counter()
        try:
            return inner(*a, **k)
        finally:
            spent.append(time.perf_counter() - t0)

    monkeypatch.setattr(autlift, "step5_cut_to_aut", timed)
    total = _time_auto(tmp_path, sizes[-1], repeats=1)
    share = sum(spent) / total
    detail = ", ".join(f"|G|={2 * n}: {t:.2f}s" for n, t in zip(sizes, times))
    report(8, "auto scaling on dihedral groups", all(s <= 3.5 for s in slopes) and sum(times) < 900,
           f"{detail}; log-log slopes {', '.join(f'{s:.2f}' for s in slopes)}; "
           f"cut-to-automorphisms share at |G|={2 * sizes[-1]}: {share:.0%}")


# 9 ---------------------------------------------------------------------------

def test_c9_engine_agreement(report):
    bad, checked = [], 0
    for name, H in _instances():
        ctx = build_context(CAT[name], H)
        A, B = _aut_group(ctx.Q), _aut_group(subcayley(H))
        for a, b in ((A, B), (PermGroup.trivial(ctx.q), B), (A, PermGroup.trivial(ctx.m))):
            checked += 1
            if autlifting(ctx, a, b, variant="L1") != autlifting(ctx, a, b, variant="L2"):
                bad.append((name, H.elements))
    report(9, "L1 and L2 autlifting agree", not bad, f"{checked} instances, {len(bad)} disagreements")
