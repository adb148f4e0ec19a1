"""Automorphisms and isomorphisms that respect a fixed composition series."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Iterable, Sequence

import numpy as np

from .autlift import SectionContext, autlifting, is_automorphism
from .cayley import (
    CayleyGroup,
    GroupError,
    GroupHom,
    Subgroup,
    automorphism_list,
    direct_product,
    generating_set,
    intersection,
    is_characteristically_simple,
    is_normal,
    is_simple,
    join,
    make_subgroup,
    maximal_normal_subgroups,
    minimal_normal_subgroups,
    quotient,
    relabel_into,
    subcayley,
    subgroup_generated,
)
from .perm import Perm, identity, inv, mul
from .permgroup import (
    ActionHom,
    EngineContractError,
    PermGroup,
    SolvableWitness,
    full_witness,
    inherit_witness,
    is_solvable,
    lex_min_in_coset,
)
from .setstab import set_stabilizer

log = logging.getLogger(__name__)

ENGINES = ("l1", "l2", "auto")


@dataclass(frozen=True)
class SeriesSpec:
    group: CayleyGroup
    terms: tuple[Subgroup, ...]

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term_sets(self) -> list[tuple[int, ...]]:
        return [S.elements for S in self.terms]


def series_from_sets(G: CayleyGroup, sets: Iterable[Iterable[int]], *, check: bool = True) -> SeriesSpec:
    """Series ``G = G_0 > ... > 1`` from the element lists of ``G_1 .. G_m`` (``G_0`` implied)."""
    terms = [G.whole] + [make_subgroup(G, s, check=check) for s in sets]
    if terms[-1].order != 1:
        terms.append(G.trivial)
    return SeriesSpec(G, tuple(terms))


@dataclass(frozen=True)
class SeriesReport:
    ok: bool
    composition: bool
    problem: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_series(spec: SeriesSpec) -> SeriesReport:
    """Check the series is a strictly decreasing subnormal chain from ``G`` to 1."""
    G, terms = spec.group, spec.terms
    if not terms or terms[0].order != G.order:
        return SeriesReport(False, False, "first term is not the whole group")
    if terms[-1].order != 1:
        return SeriesReport(False, False, "last term is not trivial")
    for i, S in enumerate(terms):
        if S.parent is not G:
            return SeriesReport(False, False, f"term {i} belongs to another group")
        if not S.is_closed():
            return SeriesReport(False, False, f"term {i} is not a subgroup")
    for i in range(len(terms) - 1):
        big, small = terms[i], terms[i + 1]
        if not small < big:
            return SeriesReport(False, False, f"term {i + 1} is not a proper subgroup of term {i}")
        if not is_normal(subcayley(big), relabel_into(big, small, subcayley(big))):
            return SeriesReport(False, False, f"term {i + 1} is not normal in term {i}")
    for i in range(len(terms) - 1):
        big = subcayley(terms[i])
        Q, _ = quotient(big, relabel_into(terms[i], terms[i + 1], big))
        if not is_simple(Q):
            return SeriesReport(True, False, f"quotient of term {i} by term {i + 1} is not simple")
    return SeriesReport(True, True)


def _require_composition(spec: SeriesSpec) -> None:
    rep = validate_series(spec)
    if not rep.ok or not rep.composition:
        raise GroupError(f"invalid composition series: {rep.problem}")


def listed_aut_group(Q: CayleyGroup) -> tuple[PermGroup, list[Perm]]:
    """``Aut(Q)`` by exhaustive search, with a witness (itself if solvable, else trivial)."""
    auts = automorphism_list(Q)
    A = PermGroup(auts, Q.order)
    if is_solvable(A):
        return full_witness(A), auts
    return A.with_witness(SolvableWitness((), A.order)), auts


def _engine_variant(engine: str, H: Subgroup) -> str:
    engine = engine.lower()
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "auto":
        return "L1" if H.is_abelian else "L2"
    return engine.upper()


def verify_series_automorphisms(spec: SeriesSpec, X: PermGroup) -> None:
    G = spec.group
    sets = [frozenset(S.elements) for S in spec.terms]
    for g in X.gens:
        if not is_automorphism(G, g):
            raise EngineContractError("output generator is not an automorphism")
        if any(frozenset(g[x] for x in s) != s for s in sets):
            raise EngineContractError("output generator moves a series term")


# -- bottom-up ------------------------------------------------------------------

def _bottom_up(spec: SeriesSpec, engine: str, level_hook=None) -> PermGroup | None:
    """Shared driver: lift level by level from ``G_m`` to ``G_0``.

    ``level_hook(i, ctx)`` may supply ``(A, quotient_aut_list)`` for level ``i``
    and ``post(i, ctx, result)`` a cut applied to the result (None aborts).
    """
    terms = spec.terms
    m = len(terms) - 1
    B = PermGroup.trivial(1)
    B = full_witness(B)
    for i in range(m, 0, -1):
        top, low = terms[i - 1], terms[i]
        Gi = subcayley(top)
        Hi = relabel_into(top, low, Gi)
        ctx = SectionContext(Gi, Hi, check=False)
        if level_hook is not None:
            A, qlist, post = level_hook(i, ctx)
        else:
            A, qlist = listed_aut_group(ctx.Q)
            post = None
        variant = _engine_variant(engine, Hi) if engine != "l2" else "L2"
        if variant == "L1" and not Hi.is_abelian and not is_solvable(_regular_of(Hi)):
            variant = "L2"
        B = autlifting(ctx, A, B, variant, quotient_aut_list=qlist if variant == "L2" else None)
        if post is not None:
            B = post(i, ctx, B)
            if B is None:
                return None
    return B


def _regular_of(S: Subgroup) -> PermGroup:
    T = subcayley(S)
    return PermGroup([tuple(T.table[:, x].tolist()) for x in generating_set(T.whole)], T.order)


def bottom_up_auto(spec: SeriesSpec, *, engine: str = "l2", verify: bool = True) -> PermGroup:
    """Automorphisms of ``G`` fixing every term, lifting up the series one factor at a time."""
    _require_composition(spec)
    X = _bottom_up(spec, engine)
    if verify:
        verify_series_automorphisms(spec, X)
    return X


# -- characteristic refinement and top-down -------------------------------------

@dataclass(frozen=True)
class CharSeries:
    terms: tuple[Subgroup, ...]
    factors: tuple[tuple[Subgroup, ...], ...]


@dataclass(frozen=True)
class Refinement:
    """``alignment[j]`` is the gap ``K_i > K_{i+1}`` holding refined term ``j``
    (the first gap it appears in); ``gaps[i]`` runs from ``K_i`` to ``K_{i+1}``."""

    characteristic: CharSeries
    refined: SeriesSpec
    alignment: tuple[int, ...]
    gaps: tuple[tuple[Subgroup, ...], ...]


def _preimage(G: CayleyGroup, proj: GroupHom, N: Subgroup) -> Subgroup:
    mask = N.mask
    return Subgroup(G, tuple(x for x in range(G.order) if mask[proj.image[x]]))


def _min_normal_type(N: Subgroup) -> tuple[int, bool]:
    if N.is_abelian:
        return (N.order if is_simple(subcayley(N)) else _smallest_prime(N.order), True)
    factors = is_characteristically_simple(subcayley(N))
    if factors is None:
        raise GroupError("a minimal normal subgroup is not characteristically simple")
    return (factors[0].order, False)


def _smallest_prime(n: int) -> int:
    p = 2
    while n % p:
        p += 1
    return p


def characteristic_series(G: CayleyGroup) -> CharSeries:
    """``G = K_0 > ... > K_r = 1`` with characteristically simple factors.

    Built from the bottom: in ``G/K`` join all minimal normal subgroups of the
    least type (simple-factor order, abelian) and take the preimage.
    """
    chain = [G.trivial]
    facs: list[tuple[Subgroup, ...]] = []
    K = G.trivial
    while K.order < G.order:
        Q, proj = quotient(G, K)
        mins = minimal_normal_subgroups(Q)
        typed = sorted(((_min_normal_type(N), N) for N in mins), key=lambda t: (t[0][0], not t[0][1]))
        best = typed[0][0]
        chosen = [N for t, N in typed if t == best]
        J = join(Q, *chosen)
        K = _preimage(G, proj, J)
        chain.append(K)
        facs.append(tuple(_preimage(G, proj, N) for N in chosen))
    return CharSeries(tuple(reversed(chain)), tuple(reversed(facs)))


def characteristic_refinement(spec: SeriesSpec) -> Refinement:
    """Refine the characteristic series by ``(K_i ∩ G_j) K_{i+1}``, dropping repeats."""
    _require_composition(spec)
    G = spec.group
    cs = characteristic_series(G)
    out: list[Subgroup] = [G.whole]
    align: list[int] = [0]
    gaps = []
    for i in range(len(cs.terms) - 1):
        Ki, Kn = cs.terms[i], cs.terms[i + 1]
        gap = [Ki]
        for Gj in spec.terms:
            T = join(G, intersection(Ki, Gj), Kn)
            if T != gap[-1]:
                gap.append(T)
        gaps.append(tuple(gap))
        for T in gap[1:]:
            out.append(T)
            align.append(i)
    refined = SeriesSpec(G, tuple(out))
    return Refinement(cs, refined, tuple(align), tuple(gaps))


def _flag_basis(H: CayleyGroup, flag: Sequence[Subgroup]) -> list[int]:
    """Basis ``e_1..e_k`` of an elementary abelian ``H`` with ``e_j ∈ flag[j-1] \\ flag[j]``."""
    return [next(x for x in flag[j].elements if not flag[j + 1].mask[x]) for j in range(len(flag) - 1)]


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if len({pow(g, k, p) for k in range(1, p)}) == p - 1:
            return g
    return 1


def borel_group(H: CayleyGroup, flag: Sequence[Subgroup]) -> PermGroup:
    """Automorphisms of an elementary abelian ``H`` fixing every term of a complete flag."""
    n = H.order
    basis = _flag_basis(H, flag)
    k = len(basis)
    p = H.element_orders[basis[0]] if basis else 1
    if k == 0:
        return full_witness(PermGroup.trivial(n))
    rows = H.rows

    def power(x, e):
        y = 0
        for _ in range(e):
            y = rows[y][x]
        return y

    coords: dict[int, tuple[int, ...]] = {}
    for c in iproduct(range(p), repeat=k):
        y = 0
        for e, cj in zip(basis, c):
            y = rows[y][power(e, cj)]
        coords[y] = c

    def realize(images: Sequence[int]) -> Perm:
        out = [0] * n
        for y, c in coords.items():
            z = 0
            for im, cj in zip(images, c):
                z = rows[z][power(im, cj)]
            out[y] = z
        return tuple(out)

    gens = []
    g = _primitive_root(p)
    if g != 1:
        for j in range(k):
            ims = list(basis)
            ims[j] = power(basis[j], g)
            gens.append(realize(ims))
    for j in range(k - 1):
        ims = list(basis)
        ims[j] = rows[basis[j]][basis[j + 1]]
        gens.append(realize(ims))
    return full_witness(PermGroup(gens, n))


def factor_aut_group(H: CayleyGroup, factors: Sequence[Subgroup]) -> PermGroup:
    """``Aut(T_1) x ... x Aut(T_k)`` acting factorwise on ``H = T_1 x ... x T_k``."""
    n = H.order
    rows = H.rows
    # decomposition h = t_1 ... t_k
    parts: dict[int, tuple[int, ...]] = {}
    for combo in iproduct(*[F.elements for F in factors]):
        y = 0
        for t in combo:
            y = rows[y][t]
        parts[y] = combo
    gens = []
    for j, F in enumerate(factors):
        T = subcayley(F)
        for a in generating_auts(T):
            amap = {F.elements[u]: F.elements[a[u]] for u in range(T.order)}
            out = [0] * n
            for y, combo in parts.items():
                z = 0
                for jj, t in enumerate(combo):
                    z = rows[z][amap[t] if jj == j else t]
                out[y] = z
            gens.append(tuple(out))
    X = PermGroup(gens, n)
    return X.with_witness(SolvableWitness((), X.order))


def generating_auts(T: CayleyGroup) -> list[Perm]:
    auts = automorphism_list(T)
    return list(PermGroup(auts, T.order).gens)


def _label_map(src_labels: Sequence[int], dst_labels: Sequence[int], size: int) -> Perm:
    """Permutation sending ``src_labels[x]`` to ``dst_labels[x]`` for every ``x``."""
    out = [-1] * size
    for s, d in zip(src_labels, dst_labels):
        if out[s] == -1:
            out[s] = d
        elif out[s] != d:
            raise AssertionError("inconsistent quotient labels")
    return tuple(out)


def _conj_group(X: PermGroup, tau: Perm) -> PermGroup:
    """``X`` transported along the relabeling ``tau`` (new label ``u`` is old ``tau[u]``)."""
    ti = inv(tau)
    gens = [mul(mul(tau, g), ti) for g in X.gens]
    wit = None
    if X.witness is not None:
        wit = SolvableWitness(tuple(mul(mul(tau, g), ti) for g in X.witness.gens), X.witness.index_bound)
    return PermGroup(gens, X.degree, witness=wit)


def top_down_auto(spec: SeriesSpec, *, engine: str = "auto", verify: bool = True) -> PermGroup:
    """Automorphisms fixing the series, computed down a characteristic series and then cut."""
    ref = characteristic_refinement(spec)
    G = spec.group
    K = ref.characteristic.terms
    A = full_witness(PermGroup.trivial(1))
    prev_labels = [0] * G.order
    for i in range(len(K) - 1):
        Qi, proj_i = quotient(G, K[i + 1])
        Hi = Subgroup(Qi, tuple(sorted({proj_i.image[x] for x in K[i].elements})))
        ctx = SectionContext(Qi, Hi, check=False)
        # relabel A from G/K_i labels to the labels of (G/K_{i+1})/H_i
        two = [ctx.proj.image[proj_i.image[x]] for x in range(G.order)]
        tau = _label_map(two, prev_labels, ctx.q)
        A_here = _conj_group(A, tau)
        # B: automorphisms of H_i fixing the refined terms inside this gap
        Hc = subcayley(Hi)
        flag_local = [Subgroup(Hc, tuple(sorted({Hi.position[proj_i.image[x]] for x in T.elements})))
                      for T in ref.gaps[i]]
        if Hi.is_abelian:
            B = borel_group(Hc, flag_local)
        else:
            B = factor_aut_group(Hc, _ordered_factors(Hc, flag_local))
        variant = _engine_variant(engine, Hi)
        A = autlifting(ctx, A_here, B, variant)
        prev_labels = list(proj_i.image)
    # the last quotient is G itself with identity labels
    X = A
    for T in spec.terms[1:-1]:
        X = set_stabilizer(X, T.elements)
    if verify:
        verify_series_automorphisms(spec, X)
    return X


def _ordered_factors(H: CayleyGroup, flag: Sequence[Subgroup]) -> list[Subgroup]:
    """Simple direct factors of ``H`` in the order the flag peels them off, bottom first."""
    mins = minimal_normal_subgroups(H)
    out = []
    for j in range(len(flag) - 1, 0, -1):
        lower, upper = flag[j], flag[j - 1]
        F = next(M for M in mins if M <= upper and not M <= lower)
        out.append(F)
    return out


# -- isomorphisms matching series -----------------------------------------------

@dataclass(frozen=True)
class IsoResult:
    isomorphic: bool
    iso: GroupHom | None = None
    autgroup: PermGroup | None = None

    @property
    def solution_count(self) -> int:
        return self.autgroup.order if self.autgroup is not None else 0


NON_ISOMORPHIC = IsoResult(False)


def _factor_orders(spec: SeriesSpec) -> list[int]:
    return [spec.terms[i].order // spec.terms[i + 1].order for i in range(spec.length)]


def comp_series_iso(spec1: SeriesSpec, spec2: SeriesSpec, *, engine: str = "l2", verify: bool = True) -> IsoResult:
    """An isomorphism ``G1 -> G2`` carrying ``G_{1,i}`` onto ``G_{2,i}``, via ``G1 x G2``.

    Lifts up the product series ``G_{1,i} x G_{2,i}`` allowing at each level only
    maps that fix or switch the two simple factors, keeps elements that switch
    at every level or at none, and reads an isomorphism off a switching element.
    """
    _require_composition(spec1)
    _require_composition(spec2)
    G1, G2 = spec1.group, spec2.group
    if G1.order != G2.order or spec1.length != spec2.length or _factor_orders(spec1) != _factor_orders(spec2):
        return NON_ISOMORPHIC
    n2 = G2.order
    D = direct_product(G1, G2)
    P = D.group
    terms = tuple(Subgroup(P, tuple(sorted(a * n2 + b for a in s1.elements for b in s2.elements)))
                  for s1, s2 in zip(spec1.terms, spec2.terms))
    pspec = SeriesSpec(P, terms)
    failed = []
    switch_state: dict = {}

    def hook(i, ctx):
        top1, low1 = spec1.terms[i - 1], spec1.terms[i]
        top2, low2 = spec2.terms[i - 1], spec2.terms[i]
        top = terms[i - 1]
        pos = top.position
        f1 = Subgroup(ctx.G, tuple(sorted(pos[a * n2 + 0] for a in top1.elements)))
        f2 = Subgroup(ctx.G, tuple(sorted(pos[0 * n2 + b] for b in top2.elements)))
        Q = ctx.Q
        T1 = Subgroup(Q, tuple(sorted({ctx.proj.image[x] for x in f1.elements})))
        T2 = Subgroup(Q, tuple(sorted({ctx.proj.image[x] for x in f2.elements})))
        A, swap = _fix_or_switch(Q, T1, T2)
        qlist = automorphism_list(ctx.QHC)
        indicator = _switch_indicator(ctx, T1, swap is not None)

        def post(i_, ctx_, X):
            if swap is None or not any(indicator(g) for g in X.gens):
                failed.append(i_)
                return None
            prev = switch_state.get("indicator")
            if prev is not None:
                # keep elements switching at this level exactly when they switch one level down
                low_pos = ctx_.H.elements
                hom = ActionHom(X, lambda g: (1, 0) if indicator(g) != prev(_restrict(g, low_pos)) else (0, 1), 2)
                X = inherit_witness(hom.kernel, X)
                if not any(indicator(g) for g in X.gens):
                    failed.append(i_)
                    return None
            switch_state["indicator"] = indicator
            return X

        return A, qlist, post

    X = _bottom_up(pspec, engine, level_hook=hook)
    if X is None:
        return NON_ISOMORPHIC
    ind = switch_state["indicator"]
    hom = ActionHom(X, lambda g: (1, 0) if ind(g) else (0, 1), 2)
    s = next(g for g in X.gens if ind(g))
    best = lex_min_in_coset(hom.kernel, s)
    f = tuple(D.split(best[a * n2])[1] for a in range(G1.order))
    iso = GroupHom(G1, G2, f)
    if verify:
        _verify_iso(spec1, spec2, iso)
    auts = bottom_up_auto(spec1, engine=engine, verify=verify)
    return IsoResult(True, iso, auts)


def _restrict(g: Perm, positions: Sequence[int]) -> Perm:
    index = {x: k for k, x in enumerate(positions)}
    return tuple(index[g[x]] for x in positions)


def _switch_indicator(ctx: SectionContext, T1: Subgroup, possible: bool):
    """Whether a lifted map sends the first factor of ``G/H`` onto the second."""
    if not possible:
        return lambda g: False
    rep = next(x for x in T1.elements if x != 0)
    blocks = ctx.cosets.blocks
    coset_of = ctx.cosets.coset_of
    t1 = T1.mask

    def indicator(g):
        return not t1[coset_of[g[blocks[rep][0]]]]

    return indicator


def _fix_or_switch(Q: CayleyGroup, T1: Subgroup, T2: Subgroup) -> tuple[PermGroup, Perm | None]:
    """``Aut(T1) x Aut(T2)``, plus a factor swap when ``T1 ≅ T2``, acting on ``Q = T1 x T2``."""
    n = Q.order
    rows = Q.rows
    parts = {}
    for a in T1.elements:
        for b in T2.elements:
            parts[rows[a][b]] = (a, b)
    C1, C2 = subcayley(T1), subcayley(T2)

    def realize(fa, fb):
        out = [0] * n
        for y, (a, b) in parts.items():
            out[y] = rows[fa(a)][fb(b)]
        return tuple(out)

    gens = []
    for aut in generating_auts(C1):
        gens.append(realize(lambda a, aut=aut: T1.elements[aut[T1.position[a]]], lambda b: b))
    for aut in generating_auts(C2):
        gens.append(realize(lambda a: a, lambda b, aut=aut: T2.elements[aut[T2.position[b]]]))
    swap = None
    phi = next(_isos(C1, C2), None)
    if phi is not None:
        phi_inv = inv(phi)
        out = [0] * n
        for y, (a, b) in parts.items():
            out[y] = rows[T1.elements[phi_inv[T2.position[b]]]][T2.elements[phi[T1.position[a]]]]
        swap = tuple(out)
        gens.append(swap)
    X = PermGroup(gens, n)
    if is_solvable(X):
        return full_witness(X), swap
    return X.with_witness(SolvableWitness((), X.order)), swap


def _isos(C1: CayleyGroup, C2: CayleyGroup):
    from .cayley import isomorphisms

    return isomorphisms(C1, C2)


def _verify_iso(spec1: SeriesSpec, spec2: SeriesSpec, iso: GroupHom) -> None:
    if not iso.is_bijective() or not iso.is_homomorphism():
        raise EngineContractError("extracted map is not an isomorphism")
    for a, b in zip(spec1.terms, spec2.terms):
        if frozenset(iso.image[x] for x in a.elements) != frozenset(b.elements):
            raise EngineContractError("extracted isomorphism does not match the series")


# -- enumeration ----------------------------------------------------------------

def _maximal_normals_below(G: CayleyGroup):
    memo: dict[tuple[int, ...], list[Subgroup]] = {}

    def below(S: Subgroup) -> list[Subgroup]:
        if S.elements not in memo:
            T = subcayley(S)
            memo[S.elements] = [Subgroup(G, tuple(S.elements[k] for k in N.elements))
                                for N in maximal_normal_subgroups(T)]
        return memo[S.elements]

    return below


def enumerate_composition_series(G: CayleyGroup) -> list[SeriesSpec]:
    """Every composition series of ``G``, depth first, maximal normal subgroups in sorted order."""
    below = _maximal_normals_below(G)
    out: list[SeriesSpec] = []

    def rec(chain: list[Subgroup]) -> None:
        top = chain[-1]
        if top.order == 1:
            out.append(SeriesSpec(G, tuple(chain)))
            return
        for N in below(top):
            rec(chain + [N])

    rec([G.whole])
    return out


def first_composition_series(G: CayleyGroup) -> SeriesSpec:
    """The first series ``enumerate_composition_series`` would list, without enumerating."""
    below = _maximal_normals_below(G)
    chain = [G.whole]
    while chain[-1].order > 1:
        chain.append(below(chain[-1])[0])
    return SeriesSpec(G, tuple(chain))


def series_count_bound(n: int) -> float:
    """``n^((1 + log_p n)/2)`` with ``p`` the least prime dividing ``n``."""
    if n == 1:
        return 1.0
    import math

    p = _smallest_prime(n)
    return n ** ((1 + math.log(n, p)) / 2)


def full_iso(G1: CayleyGroup, G2: CayleyGroup, *, engine: str = "l2") -> IsoResult:
    """Isomorphism test by trying every composition series of ``G1`` against one of ``G2``."""
    if G1.order != G2.order:
        return NON_ISOMORPHIC
    s2 = first_composition_series(G2)
    for s1 in enumerate_composition_series(G1):
        res = comp_series_iso(s1, s2, engine=engine)
        if res.isomorphic:
            return res
    return NON_ISOMORPHIC
