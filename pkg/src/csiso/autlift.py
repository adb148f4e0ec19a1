"""Lifting automorphisms across a normal subgroup.

For ``H ⊴ G`` a permutation ``γ`` of the elements of ``G`` that fixes ``H``
setwise and permutes the cosets of ``H`` induces a pair ``Θ(γ) = (α, β)``:
``α`` on the quotient ``G/H`` (coset indices) and ``β`` on ``H`` (positions in
``H.elements``).  :func:`autlifting` returns every automorphism of ``G`` fixing
``H`` whose pair lies in ``A x B``, by building an almost-solvable group of
lifts and then cutting it down to automorphisms with one set stabilizer on
``G x G x G``.

Two families of lifts are available.  ``L1`` lifts satisfy
``(hg)^γ = h^γ g^γ``; the kernel of ``Θ`` on them is a direct product of
copies of ``H``.  ``L2`` lifts satisfy this law on both sides; the kernel is a
product of copies of ``Z(H)``, and only pairs compatible with conjugation lift.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .cayley import (
    CayleyGroup,
    Cosets,
    GroupError,
    Subgroup,
    automorphism_list,
    center,
    centralizer,
    cosets,
    generating_set,
    is_normal,
    is_simple,
    join,
    quotient,
)
from .perm import Perm, identity, inv, mul
from .permgroup import (
    ActionHom,
    EngineContractError,
    PermGroup,
    SolvableWitness,
    WitnessError,
    direct_product_group,
    ensure_witness,
    inherit_witness,
    intersection_diagonal,
    is_solvable,
)
from .setstab import DiagonalAction, GroupCoset, TripleAction, coset_transporter, set_stabilizer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AutPair:
    """``alpha`` permutes coset indices of ``G/H``; ``beta`` permutes positions in ``H``."""

    alpha: Perm
    beta: Perm


class SectionContext:
    """Everything about ``H ⊴ G`` the lifting steps consult."""

    def __init__(self, G: CayleyGroup, H: Subgroup, *, check: bool = True):
        if H.parent is not G:
            raise GroupError("H must be a subgroup of G")
        if check and not is_normal(G, H):
            raise GroupError("H is not normal in G")
        self.G = G
        self.H = H
        self.cosets: Cosets = cosets(G, H)
        self.Q, self.proj = quotient(G, H)
        self.C = centralizer(G, H)
        self.HC = join(G, H, self.C)
        self.ZH = center(H)
        self.QHC, self.proj_hc = quotient(G, self.HC)
        t = G.table
        h = np.array(H.elements, dtype=np.intp)
        lookup = np.full(G.order, -1, dtype=np.intp)
        lookup[h] = np.arange(H.order)
        self.h_arr = h
        self.h_pos = lookup
        # inn[x, i] = position of x^-1 h_i x
        self.inn = lookup[t[t[G.inverse[:, None], h[None, :]], np.arange(G.order)[:, None]]]
        if check and (self.inn < 0).any():
            raise GroupError("H is not normal in G")
        # one inn-perm per HC-coset, and the reverse lookup
        self.hc_of_coset = tuple(self.proj_hc.image[b[0]] for b in self.cosets.blocks)
        self.inn_by_hc: list[Perm] = []
        self.hc_by_inn: dict[Perm, int] = {}
        for blk in cosets(G, self.HC).blocks:
            self.inn_by_hc.append(tuple(self.inn[blk[0]].tolist()))
        for x in range(G.order):
            self.hc_by_inn.setdefault(tuple(self.inn[x].tolist()), self.proj_hc.image[x])
        # HC/H as a set of quotient points
        self.hc_points = tuple(sorted({self.proj.image[x] for x in self.HC.elements}))

    @property
    def q(self) -> int:
        return self.Q.order

    @property
    def m(self) -> int:
        return self.H.order

    def inn_perm(self, x: int) -> Perm:
        return tuple(self.inn[x].tolist())

    @cached_property
    def h_gens(self) -> list[int]:
        return generating_set(self.H)

    @cached_property
    def zh_gens(self) -> list[int]:
        return generating_set(self.ZH)

    def verify(self) -> None:
        # inn_H(x) determines xHC, and is constant on it modulo inn_H(H)
        for x in range(self.G.order):
            if self.hc_by_inn[self.inn_perm(x)] != self.proj_hc.image[x]:
                raise GroupError("inn_H(x) does not determine the coset xHC")
        inner = {self.inn_perm(x) for x in self.H.elements}
        if self.QHC.order * len(inner) != len(self.hc_by_inn):
            raise GroupError("G/HC does not match inn_H(G)/inn_H(H)")


def build_context(G: CayleyGroup, H: Subgroup) -> SectionContext:
    ctx = SectionContext(G, H)
    ctx.verify()
    return ctx


# -- the map Θ and the kernels -------------------------------------------------

def theta(ctx: SectionContext, gamma: Sequence[int]) -> AutPair:
    g = np.asarray(gamma, dtype=np.intp)
    hpos = ctx.h_pos[g[ctx.h_arr]]
    if (hpos < 0).any():
        raise GroupError("permutation does not stabilize H")
    coset_of = np.asarray(ctx.cosets.coset_of)
    alpha = []
    for blk in ctx.cosets.blocks:
        targets = coset_of[g[list(blk)]]
        if (targets != targets[0]).any():
            raise GroupError("permutation breaks a coset of H")
        alpha.append(int(targets[0]))
    return AutPair(tuple(alpha), tuple(hpos.tolist()))


def _phi(ctx: SectionContext, X: int, h: int) -> Perm:
    out = list(range(ctx.G.order))
    rows = ctx.G.rows
    for x in ctx.cosets.blocks[X]:
        out[x] = rows[x][h]
    return tuple(out)


def ker_L1_generators(ctx: SectionContext) -> list[Perm]:
    return [_phi(ctx, X, h) for X in range(1, ctx.q) for h in ctx.h_gens]


def ker_L2_generators(ctx: SectionContext) -> list[Perm]:
    return [_phi(ctx, X, h) for X in range(1, ctx.q) for h in ctx.zh_gens]


def _assemble(ctx: SectionContext, pair: AutPair, bs: Sequence[int]) -> Perm:
    """``(k a_X)^γ = k^β b_X`` with ``a_X = min X`` and the given ``b_X``."""
    t = ctx.G.table
    beta_h = ctx.h_arr[np.asarray(pair.beta, dtype=np.intp)]
    out = np.empty(ctx.G.order, dtype=np.intp)
    for X, blk in enumerate(ctx.cosets.blocks):
        a = blk[0]
        out[t[ctx.h_arr, a]] = t[beta_h, bs[X]]
    return tuple(out.tolist())


def lift_L1(ctx: SectionContext, pair: AutPair) -> Perm:
    blocks = ctx.cosets.blocks
    return _assemble(ctx, pair, [blocks[pair.alpha[X]][0] for X in range(ctx.q)])


def _inn_target(ctx: SectionContext, pair: AutPair, a: int) -> Perm:
    return mul(mul(inv(pair.beta), ctx.inn_perm(a)), pair.beta)


def _l2_choices(ctx: SectionContext, pair: AutPair) -> list[int] | None:
    out = []
    for X, blk in enumerate(ctx.cosets.blocks):
        target = np.asarray(_inn_target(ctx, pair, blk[0]), dtype=np.intp)
        cand = ctx.cosets.blocks[pair.alpha[X]]
        hit = next((b for b in cand if np.array_equal(ctx.inn[b], target)), None)
        if hit is None:
            return None
        out.append(hit)
    return out


def l2_condition(ctx: SectionContext, pair: AutPair) -> bool:
    """Whether ``β^-1 inn_H(a) β = inn_H(b)`` is solvable with ``b ∈ X^α`` for every coset ``X``."""
    return _l2_choices(ctx, pair) is not None


def lift_L2(ctx: SectionContext, pair: AutPair) -> Perm:
    bs = _l2_choices(ctx, pair)
    if bs is None:
        raise EngineContractError("pair does not lift: conjugation condition fails on some coset")
    return _assemble(ctx, pair, bs)


# -- law checks ------------------------------------------------------------

def satisfies_left_law(ctx: SectionContext, gamma: Sequence[int]) -> bool:
    """``(hg)^γ = h^γ g^γ`` for all ``h ∈ H``, ``g ∈ G``."""
    g = np.asarray(gamma, dtype=np.intp)
    t = ctx.G.table
    h = ctx.h_arr
    return bool(np.array_equal(g[t[h, :]], t[np.ix_(g[h], g)]))


def satisfies_right_law(ctx: SectionContext, gamma: Sequence[int]) -> bool:
    """``(gh)^γ = g^γ h^γ`` for all ``g ∈ G``, ``h ∈ H``."""
    g = np.asarray(gamma, dtype=np.intp)
    t = ctx.G.table
    h = ctx.h_arr
    return bool(np.array_equal(g[t[:, h]], t[np.ix_(g, g[h])]))


def is_automorphism(G: CayleyGroup, gamma: Sequence[int]) -> bool:
    g = np.asarray(gamma, dtype=np.intp)
    return bool(np.array_equal(g[G.table], G.table[np.ix_(g, g)]))


# -- the steps -------------------------------------------------------------

def _filter_group(X: PermGroup, keep) -> PermGroup:
    return PermGroup([x for x in X.elements() if keep(x)], X.degree)


def _almost_solvable(X: PermGroup) -> PermGroup | None:
    if X.witness is not None:
        return X
    if is_solvable(X):
        return X.with_witness(SolvableWitness(X.gens, 1))
    return None


def step1_stabilize_HC(ctx: SectionContext, A: PermGroup) -> PermGroup:
    """Elements of ``A`` stabilizing ``HC/H`` inside the quotient."""
    if ctx.HC.order in (ctx.G.order, ctx.H.order) or A.is_trivial:
        return A
    pts = ctx.hc_points
    X = _almost_solvable(A)
    if X is not None:
        return set_stabilizer(X, pts)
    S = frozenset(pts)
    return _filter_group(A, lambda a: frozenset(a[p] for p in S) == S)


def _delta_of(m: int, y: Sequence[int]) -> list[int]:
    return [w * m + y[w] for w in range(m)]


def step2_normalize_inn(ctx: SectionContext, B: PermGroup,
                        quotient_aut_list: Sequence[Sequence[int]] | None = None) -> PermGroup:
    """Elements of ``B`` normalizing ``inn_H(G)``."""
    QHC = ctx.QHC
    if QHC.order == 1 or B.is_trivial:
        return B
    if quotient_aut_list is None:
        if is_simple(QHC):
            quotient_aut_list = automorphism_list(QHC)
        elif B.order <= ctx.m ** 2:
            Y = set(ctx.hc_by_inn)
            return _filter_group(B, lambda b: all(mul(mul(inv(b), y), b) in Y for y in ctx.inn_by_hc))
        else:
            raise EngineContractError(
                f"inn_H(G)/inn_H(H) of order {QHC.order} is not simple, no automorphism list was "
                f"supplied and |B| = {B.order} exceeds |H|^2")
    Bw = _almost_solvable(B)
    if Bw is None:
        raise WitnessError("step 2 needs an almost-solvable B")
    m = ctx.m
    act = DiagonalAction(m, 2)
    gens_q = generating_set(QHC.whole)
    K_in_coset: dict[int, list[Perm]] = {}
    for y, c in ctx.hc_by_inn.items():
        K_in_coset.setdefault(c, []).append(y)
    for c in K_in_coset:
        K_in_coset[c].sort()
    found: list[GroupCoset] = []
    start = GroupCoset(Bw, identity(m))
    for sigma in quotient_aut_list:
        frontier = [start]
        for c in gens_q:
            y = ctx.inn_by_hc[c]
            dy = _delta_of(m, y)
            nxt = []
            for C in frontier:
                for z in K_in_coset[sigma[c]]:
                    r = coset_transporter(C, dy, _delta_of(m, z), action=act)
                    if r is not None:
                        nxt.append(r)
            frontier = nxt
            if not frontier:
                break
        found.extend(frontier)
    gens = []
    for C in found:
        gens.extend(C.group.gens)
        gens.append(C.rep)
    return inherit_witness(PermGroup(gens, m), Bw)


def _induced_on_hc_a(ctx: SectionContext, alpha: Perm) -> Perm:
    """``𝔞(α)``: the permutation of ``G/HC`` induced by ``α`` on ``G/H``."""
    rep_coset = {}
    for X, c in enumerate(ctx.hc_of_coset):
        rep_coset.setdefault(c, X)
    return tuple(ctx.hc_of_coset[alpha[rep_coset[c]]] for c in range(ctx.QHC.order))


def _induced_on_hc_b(ctx: SectionContext, beta: Perm) -> Perm:
    """``𝔟(β)``: the permutation of ``inn_H(G)/inn_H(H) = G/HC`` induced by conjugation."""
    binv = inv(beta)
    return tuple(ctx.hc_by_inn[mul(mul(binv, y), beta)] for y in ctx.inn_by_hc)


def _image_with_witness(hom: ActionHom, X: PermGroup) -> PermGroup:
    img = hom.image
    if X.witness is None:
        return img
    wg = tuple(hom(g) for g in X.witness.gens)
    return img.with_witness(SolvableWitness(wg, X.witness.index_bound))


def pair_group(A: PermGroup, B: PermGroup) -> PermGroup:
    """``A x B`` on ``q + m`` points, with the product witness."""
    return direct_product_group(A, B)


def split_pair(ctx: SectionContext, x: Sequence[int]) -> AutPair:
    q = ctx.q
    return AutPair(tuple(x[:q]), tuple(v - q for v in x[q:]))


def join_pair(ctx: SectionContext, pair: AutPair) -> Perm:
    q = ctx.q
    return tuple(pair.alpha) + tuple(q + v for v in pair.beta)


def step3_match(ctx: SectionContext, A: PermGroup, B: PermGroup) -> PermGroup:
    """Pairs ``(α, β)`` of ``A x B`` inducing the same map on ``G/HC``, as a group on ``q + m`` points."""
    q, m = ctx.q, ctx.m
    A = _almost_solvable(A) or A
    B = _almost_solvable(B) or B
    P = pair_group(A, B)
    if ctx.QHC.order == 1:
        return P
    r = ctx.QHC.order
    ha = ActionHom(A, lambda a: _induced_on_hc_a(ctx, a), r)
    hb = ActionHom(B, lambda b: _induced_on_hc_b(ctx, b), r)
    U = intersection_diagonal(_image_with_witness(ha, A), _image_with_witness(hb, B))
    idq, idm = identity(q), identity(m)
    gens = [join_pair(ctx, AutPair(k, idm)) for k in ha.kernel.gens]
    gens += [join_pair(ctx, AutPair(idq, k)) for k in hb.kernel.gens]
    gens += [join_pair(ctx, AutPair(ha.preimage(u), hb.preimage(u))) for u in U.gens]
    M = PermGroup(gens, q + m)
    if P.witness is None:
        return M
    return inherit_witness(M, P)


def lifted_group(ctx: SectionContext, pairs: PermGroup, variant: str) -> PermGroup:
    """Kernel plus lifts of the generators of ``pairs`` (a group on ``q + m`` points)."""
    if variant == "L1":
        kern, lift = ker_L1_generators(ctx), lift_L1
    else:
        kern, lift = ker_L2_generators(ctx), lift_L2
    gens = kern + [lift(ctx, split_pair(ctx, x)) for x in pairs.gens]
    wit = None
    if pairs.witness is not None and (variant == "L2" or is_solvable_subgroup(ctx.H)):
        wgens = tuple(kern) + tuple(lift(ctx, split_pair(ctx, x)) for x in pairs.witness.gens)
        wit = SolvableWitness(wgens, pairs.witness.index_bound)
    return PermGroup(gens, ctx.G.order, witness=wit)


def is_solvable_subgroup(H: Subgroup) -> bool:
    from .cayley import subcayley

    return is_solvable(_regular(subcayley(H)))


def _regular(G: CayleyGroup) -> PermGroup:
    """Right regular representation of ``G``."""
    return PermGroup([tuple(G.table[:, x].tolist()) for x in generating_set(G.whole)], G.order)


def build_L1_hat(ctx: SectionContext, A: PermGroup, B: PermGroup) -> PermGroup:
    for a in A.gens:
        if not is_automorphism(ctx.Q, a):
            raise GroupError("A contains a non-automorphism of G/H")
    H_cay = _subcayley_cached(ctx)
    for b in B.gens:
        if not is_automorphism(H_cay, b):
            raise GroupError("B contains a non-automorphism of H")
    A = _almost_solvable(A) or A
    B = _almost_solvable(B) or B
    return lifted_group(ctx, pair_group(A, B), "L1")


def _subcayley_cached(ctx: SectionContext) -> CayleyGroup:
    if not hasattr(ctx, "_h_cayley"):
        from .cayley import subcayley

        ctx._h_cayley = subcayley(ctx.H)
    return ctx._h_cayley


def step5_cut_to_aut(ctx: SectionContext, Lhat: PermGroup) -> PermGroup:
    """``Lhat ∩ Aut(G)`` by stabilizing ``{(a, b, ab)}`` in ``G x G x G``."""
    G = ctx.G
    n = G.order
    if all(is_automorphism(G, g) for g in Lhat.gens):
        return Lhat if Lhat.witness is not None else (ensure_witness(Lhat))
    if Lhat.witness is None and not is_solvable(Lhat):
        raise WitnessError("the lifted group carries no solvable witness")
    t = G.table
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    graph = (a * n + b) * n + t[a, b]
    S = set_stabilizer(Lhat, graph.tolist(), action=TripleAction(n))
    for g in S.gens:
        if not is_automorphism(G, g):
            raise EngineContractError("set stabilizer returned a non-automorphism")
    return S


VARIANTS = ("L1", "L2")


def autlifting(ctx: SectionContext, A: PermGroup, B: PermGroup, variant: str = "L2",
               quotient_aut_list: Sequence[Sequence[int]] | None = None) -> PermGroup:
    """Automorphisms ``γ`` of ``G`` with ``H^γ = H`` and ``Θ(γ) ∈ A x B``."""
    variant = variant.upper()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if A.degree != ctx.q or B.degree != ctx.m:
        raise GroupError("A must act on G/H and B on H")
    if variant == "L1":
        Lhat = build_L1_hat(ctx, A, B)
    else:
        A1 = step1_stabilize_HC(ctx, A)
        B1 = step2_normalize_inn(ctx, B, quotient_aut_list)
        M = step3_match(ctx, A1, B1)
        Lhat = lifted_group(ctx, M, "L2")
    log.debug("autlifting %s: |G|=%d |H|=%d lifted order %d", variant, ctx.G.order, ctx.m, Lhat.order)
    return step5_cut_to_aut(ctx, Lhat)
