"""Permutation groups by stabilizer chains.

Groups are immutable once built.  The chain is a deterministic incremental
Schreier-Sims; a *tracked* chain carries a second permutation alongside each
element so that the same code computes images, preimages and kernels of
actions (see :class:`ActionHom`).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .perm import Perm, identity, inv, is_identity, mul

log = logging.getLogger(__name__)

#: cap on candidate partners tried per coarsening round in block search
BLOCK_CANDIDATES = 256


class EngineContractError(RuntimeError):
    """A precondition the polynomial-time guarantees rely on does not hold."""


class WitnessError(EngineContractError):
    """An operation needing an almost-solvable group got one without a witness."""


def _pmul(a, b):
    return (mul(a[0], b[0]), mul(a[1], b[1]))


def _pinv(a):
    return (inv(a[0]), inv(a[1]))


class _Level:
    __slots__ = ("base", "gens", "trans", "orbit", "checked")

    def __init__(self, base: int, ident):
        self.base = base
        self.gens: list = []
        self.trans: dict[int, tuple] = {base: (ident, ident)}
        self.orbit: list[int] = [base]
        self.checked: set = set()


class StabChain:
    """Stabilizer chain; elements are perms, or ``(perm, payload)`` pairs when tracked.

    With ``base`` given, one level per listed point is created up front, in that
    order (levels may carry trivial orbits).
    """

    def __init__(self, degree: int, *, tracked: bool = False, payload_degree: int = 0,
                 base: Sequence[int] | None = None, collect_kernel: bool = True):
        self.degree = degree
        self.tracked = tracked
        self.collect_kernel = tracked and collect_kernel
        if tracked:
            self._mul, self._inv = _pmul, _pinv
            self._id = (identity(degree), identity(payload_degree))
            self._img = lambda e: e[0]
        else:
            self._mul, self._inv = mul, inv
            self._id = identity(degree)
            self._img = lambda e: e
        self.levels: list[_Level] = []
        self.kernel: list[Perm] = []
        self._kernel_pairs: list = []
        if tracked:
            self._kernel_chain = StabChain(payload_degree)
        if base is not None:
            for b in base:
                self._push_level(b)

    def _push_level(self, b: int) -> None:
        L = _Level(b, self._id)
        L.gens.extend(self._kernel_pairs)
        self.levels.append(L)

    # -- queries ---------------------------------------------------------
    def strip(self, e, start: int = 0):
        img, mul_, levels = self._img, self._mul, self.levels
        for i in range(start, len(levels)):
            L = levels[i]
            beta = img(e)[L.base]
            t = L.trans.get(beta)
            if t is None:
                return e, i
            e = mul_(e, t[1])
        return e, len(levels)

    def contains(self, p: Perm) -> bool:
        if self.tracked:
            raise TypeError("membership on a tracked chain: use strip on pairs")
        r, _ = self.strip(p)
        return is_identity(r)

    def order(self) -> int:
        out = 1
        for L in self.levels:
            out *= len(L.orbit)
        return out

    def strong_generators(self) -> list:
        seen, out = set(), []
        for L in self.levels:
            for g in L.gens:
                key = g if not self.tracked else g[0]
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out

    # -- construction ----------------------------------------------------
    def _record_kernel(self, e) -> bool:
        """Keep ``e`` (identity image) as a kernel generator if it is new."""
        if not self.collect_kernel or is_identity(e[1]) or not self._kernel_chain.add(e[1]):
            return False
        self.kernel.append(e[1])
        self._kernel_pairs.append(e)
        # kernel elements fix every base point; they still feed Schreier generators
        for L in self.levels:
            L.gens.append(e)
        return True

    def _extend_orbit(self, L: _Level, h) -> None:
        """Close the orbit after ``h`` joined ``L.gens``; existing entries are kept."""
        img, mul_, inv_ = self._img, self._mul, self._inv
        orbit, trans = L.orbit, L.trans
        start = len(orbit)
        hi = img(h)
        for k in range(start):
            beta = orbit[k]
            gamma = hi[beta]
            if gamma not in trans:
                v = mul_(trans[beta][0], h)
                trans[gamma] = (v, inv_(v))
                orbit.append(gamma)
        i = start
        while i < len(orbit):
            beta = orbit[i]
            u = trans[beta][0]
            for s in L.gens:
                gamma = img(s)[beta]
                if gamma not in trans:
                    v = mul_(u, s)
                    trans[gamma] = (v, inv_(v))
                    orbit.append(gamma)
            i += 1

    def _add_at(self, h, upto: int, start: int) -> None:
        for l in range(start, upto + 1):
            L = self.levels[l]
            L.gens.append(h)
            self._extend_orbit(L, h)

    def _new_level_for(self, h) -> None:
        p = self._img(h)
        for i, x in enumerate(p):
            if x != i:
                self._push_level(i)
                return
        raise AssertionError("identity image cannot open a level")

    def add(self, g) -> bool:
        """Add a generator; returns False when it was already a member."""
        h, j = self.strip(g)
        if is_identity(self._img(h)):
            if self._record_kernel(h) and self.levels:
                self._schreier(len(self.levels) - 1)
            return False
        if j == len(self.levels):
            self._new_level_for(h)
        self._add_at(h, j, 0)
        self._schreier(j)
        return True

    def sift_extend(self, g) -> bool:
        """Add the residue of ``g`` to the levels it belongs to, without Schreier generators.

        Only a chain whose order reaches the known group order is complete.
        """
        h, j = self.strip(g)
        if is_identity(self._img(h)):
            return False
        if j == len(self.levels):
            self._new_level_for(h)
        self._add_at(h, j, 0)
        return True

    def _schreier(self, i: int) -> None:
        img, mul_ = self._img, self._mul
        while i >= 0:
            L = self.levels[i]
            restart = False
            k = 0
            while k < len(L.orbit) and not restart:
                beta = L.orbit[k]
                u = L.trans[beta][0]
                for si, s in enumerate(L.gens):
                    if (beta, si) in L.checked:
                        continue
                    L.checked.add((beta, si))
                    gamma = img(s)[beta]
                    sg = mul_(mul_(u, s), L.trans[gamma][1])
                    h, j = self.strip(sg, i + 1)
                    if is_identity(img(h)):
                        if self._record_kernel(h):
                            i = len(self.levels) - 1
                            restart = True
                            break
                        continue
                    if j == len(self.levels):
                        self._new_level_for(h)
                    self._add_at(h, j, i + 1)
                    i = j
                    restart = True
                    break
                k += 1
            if not restart:
                i -= 1

    # -- enumeration -----------------------------------------------------
    def transversal_products(self) -> Iterator:
        """Every group element exactly once, as ``u_{k-1} ... u_1 u_0``."""
        levels = self.levels
        mul_ = self._mul

        def rec(i, acc):
            if i < 0:
                yield acc
                return
            L = levels[i]
            for beta in L.orbit:
                yield from rec(i - 1, mul_(acc, L.trans[beta][0]))

        yield from rec(len(levels) - 1, self._id)


@dataclass(frozen=True)
class SolvableWitness:
    """A normal solvable subgroup ``R`` of the carrying group, with ``|X:R| <= index_bound``."""

    gens: tuple[Perm, ...]
    index_bound: int


class PermGroup:
    """A permutation group on ``0..degree-1`` given by generators."""

    def __init__(self, gens: Iterable[Sequence[int]] = (), degree: int | None = None,
                 *, witness: SolvableWitness | None = None, _chain: StabChain | None = None):
        gens = [tuple(map(int, g)) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group with no generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise ValueError(f"generator degree {len(g)} != {degree}")
        self.degree = degree
        if _chain is None:
            _chain = StabChain(degree)
            kept = []
            for g in gens:
                if _chain.add(g):
                    kept.append(g)
            gens = kept
        self.gens: tuple[Perm, ...] = tuple(gens)
        self.chain = _chain
        self.witness = witness

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], degree: int | None = None) -> "PermGroup":
        return cls(gens, degree)

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls((), degree)

    def __repr__(self) -> str:
        w = "" if self.witness is None else f", witness index {self.witness.index_bound}"
        return f"PermGroup(degree={self.degree}, order={self.order}, gens={len(self.gens)}{w})"

    @cached_property
    def order(self) -> int:
        return self.chain.order()

    def __len__(self) -> int:
        return self.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def contains(self, p: Sequence[int]) -> bool:
        p = tuple(p)
        if len(p) != self.degree:
            return False
        return self.chain.contains(p)

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.order == other.order and self.is_subgroup_of(other)

    __hash__ = object.__hash__

    def elements(self) -> Iterator[Perm]:
        return self.chain.transversal_products()

    @property
    def base(self) -> list[int]:
        return [L.base for L in self.chain.levels]

    @property
    def strong_generators(self) -> list[Perm]:
        return self.chain.strong_generators()

    def extended(self, extra: Iterable[Sequence[int]]) -> "PermGroup":
        """Group generated by ``self`` and ``extra`` (no witness carried)."""
        return PermGroup(list(self.gens) + [tuple(x) for x in extra], self.degree)

    def with_witness(self, witness: SolvableWitness | None) -> "PermGroup":
        return PermGroup(self.gens, self.degree, witness=witness, _chain=self.chain)

    def gens_array(self) -> np.ndarray:
        """Generators as a ``(k, degree)`` array, built once; callers must not write to it."""
        arr = self.__dict__.get("_gens_arr")
        if arr is None:
            arr = np.array(self.gens, dtype=np.intp).reshape(len(self.gens), self.degree)
            self._gens_arr = arr
        return arr

    # -- orbits ---------------------------------------------------------
    def orbits(self, points: Iterable[int] | None = None) -> list[list[int]]:
        labels = kernels.orbit_labels(self.gens_array()) if self.gens else np.arange(self.degree)
        if points is None:
            pts = range(self.degree)
        else:
            pts = sorted(set(int(p) for p in points))
            lab_set = set(pts)
            for p in pts:
                for g in self.gens:
                    if g[p] not in lab_set:
                        raise ValueError("point set is not stable under the group")
        groups: dict[int, list[int]] = {}
        for p in pts:
            groups.setdefault(int(labels[p]), []).append(p)
        return sorted(groups.values(), key=lambda o: o[0])

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        out = [point]
        for x in out:
            for g in self.gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return sorted(out)


def _rng(salt: int) -> random.Random:
    # fixed seeds keep every randomized construction reproducible
    return random.Random(0x5EED + salt)


def random_element(G: PermGroup, rng: random.Random) -> Perm:
    """Uniformly random element, one random transversal entry per level."""
    g = identity(G.degree)
    for L in reversed(G.chain.levels):
        g = mul(g, L.trans[L.orbit[rng.randrange(len(L.orbit))]][0])
    return g


#: random sifts allowed before falling back to deterministic Schreier-Sims
RANDOM_SIFT_LIMIT = 2000


def group_of_known_order(gens: Sequence[Perm], degree: int, order: int,
                         sample: Callable[[], Perm]) -> PermGroup:
    """Group generated by ``gens`` whose order is known, given a uniform sampler.

    The chain is grown from sifted samples; reaching ``order`` certifies it.
    """
    chain = StabChain(degree)
    kept = [g for g in gens if chain.sift_extend(tuple(g))]
    tries = 0
    while chain.order() < order and tries < RANDOM_SIFT_LIMIT:
        g = sample()
        if chain.sift_extend(g):
            kept.append(g)
        tries += 1
    if chain.order() != order:
        G = PermGroup(kept, degree)
        if G.order != order:
            raise EngineContractError(f"expected a group of order {order}, generated {G.order}")
        return G
    return PermGroup(kept, degree, _chain=chain)


def coset_union(K: PermGroup, reps: Sequence[Perm]) -> PermGroup:
    """The group ``K ∪ K r_1 ∪ ...`` when those cosets are distinct and form a group."""
    if not reps:
        return K
    reps = [identity(K.degree)] + [tuple(r) for r in reps]
    rng = _rng(K.degree + len(reps))
    return group_of_known_order(
        list(K.gens) + reps[1:], K.degree, K.order * len(reps),
        lambda: mul(random_element(K, rng), reps[rng.randrange(len(reps))]))


def witness_group(G: PermGroup) -> PermGroup:
    if G.witness is None:
        raise WitnessError("group carries no solvable witness")
    return PermGroup(G.witness.gens, G.degree)


def ensure_witness(G: PermGroup) -> PermGroup:
    """``G`` with a witness attached: kept if present, else ``G`` itself when solvable."""
    if G.witness is not None:
        return G
    if is_solvable(G):
        return G.with_witness(SolvableWitness(G.gens, 1))
    raise WitnessError(f"{G!r} is not solvable and carries no witness")


def full_witness(G: PermGroup) -> PermGroup:
    """Attach the witness ``G`` itself (caller asserts solvability)."""
    return G.with_witness(SolvableWitness(G.gens, 1))


# -- normal closure, derived series ------------------------------------------

def normal_closure(G: PermGroup, seeds: Iterable[Sequence[int]]) -> PermGroup:
    chain = StabChain(G.degree)
    gens: list[Perm] = []
    queue = []
    for s in seeds:
        s = tuple(s)
        if chain.add(s):
            gens.append(s)
            queue.append(s)
    while queue:
        n = queue.pop()
        for g in G.gens:
            c = mul(mul(inv(g), n), g)
            if chain.add(c):
                gens.append(c)
                queue.append(c)
    return PermGroup(gens, G.degree, _chain=chain)


def commutator(a: Perm, b: Perm) -> Perm:
    return mul(mul(inv(a), inv(b)), mul(a, b))


def derived_subgroup(G: PermGroup) -> PermGroup:
    gs = G.gens
    return normal_closure(G, [commutator(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]])


def derived_series(G: PermGroup) -> list[PermGroup]:
    out = [G]
    while not out[-1].is_trivial:
        D = derived_subgroup(out[-1])
        if D.order == out[-1].order:
            break
        out.append(D)
    return out


def is_solvable(G: PermGroup) -> bool:
    return derived_series(G)[-1].is_trivial


def is_normal_in(N: PermGroup, G: PermGroup) -> bool:
    return all(N.contains(mul(mul(inv(g), n), g)) for n in N.gens for g in G.gens)


# -- actions, homomorphisms, kernels -----------------------------------------

class ActionHom:
    """Homomorphism from ``G`` given by ``act(g)``, a permutation of ``0..m-1``.

    The image chain carries one preimage per transversal element.  The kernel
    is filled from uniformly random elements of ``G`` divided by their lifted
    images until its order reaches ``|G| / |image|``, so it is exact; the seed
    is fixed, so it is also deterministic.
    """

    def __init__(self, G: PermGroup, act: Callable[[Perm], Perm], degree: int):
        self.source = G
        self.act = act
        self.degree = degree
        chain = StabChain(degree, tracked=True, payload_degree=G.degree, collect_kernel=False)
        for g in G.gens:
            chain.add((tuple(act(g)), g))
        self.chain = chain

    @cached_property
    def image(self) -> PermGroup:
        gens = [e[0] for e in self.chain.strong_generators()]
        return PermGroup(gens, self.degree)

    def _kernel_element(self, g: Perm) -> Perm:
        r, _ = self.chain.strip((tuple(self.act(g)), g))
        return r[1]

    @cached_property
    def kernel(self) -> PermGroup:
        G = self.source
        target = G.order // self.chain.order()
        rng = _rng(G.degree)
        return group_of_known_order(
            [self._kernel_element(g) for g in G.gens], G.degree, target,
            lambda: self._kernel_element(random_element(G, rng)))

    def __call__(self, g: Perm) -> Perm:
        return tuple(self.act(g))

    def preimage(self, u: Sequence[int]) -> Perm:
        r, _ = self.chain.strip((tuple(u), identity(self.source.degree)))
        if not is_identity(r[0]):
            raise ValueError("element is not in the image")
        return inv(r[1])

    def lifted_transversal(self) -> list[Perm]:
        """One preimage per image element: right coset reps of the kernel."""
        return [e[1] for e in self.chain.transversal_products()]

    def image_order(self) -> int:
        return self.chain.order()


def coset_transversal(G: PermGroup, R: PermGroup) -> list[Perm]:
    """Right coset representatives of ``R <= G``, identity first (orbit on cosets)."""
    reps = [G.identity]
    i = 0
    target = G.order // R.order
    while i < len(reps) and len(reps) < target:
        t = reps[i]
        for g in G.gens:
            c = mul(t, g)
            if not any(R.contains(mul(c, inv(r))) for r in reps):
                reps.append(c)
        i += 1
    return reps


def coset_index(R: PermGroup, reps: Sequence[Perm], x: Perm) -> int:
    for j, r in enumerate(reps):
        if R.contains(mul(x, inv(r))):
            return j
    raise ValueError("element outside the transversal's group")


def normal_intersection(S: PermGroup, W: PermGroup, reps: Sequence[Perm]) -> PermGroup:
    """``S ∩ W`` for ``W`` normal in an ambient group with right transversal ``reps``."""
    if len(reps) == 1:
        return S
    hom = ActionHom(S, lambda s: tuple(coset_index(W, reps, mul(r, s)) for r in reps), len(reps))
    return hom.kernel


def restricted_images(G: PermGroup, points: Sequence[int]) -> np.ndarray:
    """Generator images on a G-stable point list, relabeled to positions."""
    pts = np.asarray(points, dtype=np.intp)
    lookup = np.full(G.degree, -1, dtype=np.intp)
    lookup[pts] = np.arange(len(pts))
    if not G.gens:
        return np.empty((0, len(pts)), dtype=np.intp)
    return lookup[G.gens_array()[:, pts]]


# -- block systems ---------------------------------------------------------

def block_labels(images: np.ndarray, m: int) -> np.ndarray:
    """Blocks of a transitive action on ``0..m-1`` on which the action is primitive.

    Coarsens repeatedly: each round merges along the smallest nontrivial block
    through the least point (ties: lexicographically least block), until the
    induced action on blocks is primitive.  Returns per-point block labels
    numbered by least member; all-distinct labels when already primitive.
    """
    labels = np.arange(m, dtype=np.intp)
    cur = np.ascontiguousarray(images, dtype=np.intp)
    b = m
    while b > 2 and cur.shape[0]:
        cands = np.arange(1, min(b, BLOCK_CANDIDATES + 1), dtype=np.intp)
        # the least partner reaching the least size gives the lexicographically
        # least block: a smaller point in another such block would itself qualify
        w, _ = kernels.smallest_block(cur, 0, cands)
        if w < 0:
            break
        merged = kernels.minimal_block(cur, 0, int(w))
        # renumber merged classes by least member (labels are least members)
        uniq, dense = np.unique(merged, return_inverse=True)
        labels = dense[labels]
        reps = np.unique(dense, return_index=True)[1]
        cur = np.ascontiguousarray(dense[cur[:, reps]])
        b = len(uniq)
    return labels


def minimal_block_system(G: PermGroup, orbit: Sequence[int]) -> list[list[int]]:
    """Block system of ``G`` on a transitive ``orbit`` with primitive action on the blocks.

    Returns singletons when ``G`` is primitive on the orbit.
    """
    orbit = sorted(int(p) for p in orbit)
    if len(orbit) < 2:
        raise ValueError("orbit must have at least two points")
    imgs = restricted_images(G, orbit)
    if (imgs < 0).any():
        raise ValueError("point set is not stable under the group")
    if len(set(kernels.orbit_labels(imgs).tolist())) != 1:
        raise ValueError("group is not transitive on the orbit")
    labels = block_labels(imgs, len(orbit))
    blocks: dict[int, list[int]] = {}
    for i, lab in enumerate(labels.tolist()):
        blocks.setdefault(lab, []).append(orbit[i])
    return sorted(blocks.values(), key=lambda b: b[0])


@dataclass
class BlockAction:
    image: PermGroup
    hom: ActionHom
    kernel: PermGroup

    def __call__(self, g: Perm) -> Perm:
        return self.hom(g)

    def transversal(self) -> list[Perm]:
        return self.hom.lifted_transversal()


def action_on_blocks(G: PermGroup, blocks: Sequence[Sequence[int]]) -> BlockAction:
    which = {}
    for k, blk in enumerate(blocks):
        for p in blk:
            which[p] = k
    reps = [blk[0] for blk in blocks]

    def act(g):
        return tuple(which[g[r]] for r in reps)

    for g in G.gens:
        for blk in blocks:
            k = which[g[blk[0]]]
            if any(which.get(g[p]) != k for p in blk):
                raise ValueError("blocks are not permuted by the group")
    hom = ActionHom(G, act, len(blocks))
    return BlockAction(hom.image, hom, hom.kernel)


# -- products and intersections -------------------------------------------

def direct_product_group(A: PermGroup, B: PermGroup) -> PermGroup:
    """``A x B`` on ``A.degree + B.degree`` points, with product witness when available."""
    da, db = A.degree, B.degree

    def left(a):
        return tuple(a) + tuple(range(da, da + db))

    def right(b):
        return tuple(range(da)) + tuple(da + x for x in b)

    gens = [left(a) for a in A.gens] + [right(b) for b in B.gens]
    wit = None
    if A.witness is not None or B.witness is not None:
        wa = A.witness.gens if A.witness is not None else ()
        ia = A.witness.index_bound if A.witness is not None else A.order
        wb = B.witness.gens if B.witness is not None else ()
        ib = B.witness.index_bound if B.witness is not None else B.order
        wit = SolvableWitness(tuple(left(a) for a in wa) + tuple(right(b) for b in wb), ia * ib)
    return PermGroup(gens, da + db, witness=wit)


def _try_witness(G: PermGroup) -> PermGroup:
    if G.witness is not None:
        return G
    if is_solvable(G):
        return full_witness(G)
    return G


def intersection_diagonal(A: PermGroup, B: PermGroup) -> PermGroup:
    """``A ∩ B`` as the stabilizer of the diagonal of ``Ω x Ω`` under ``A x B``."""
    from .setstab import PairAction, set_stabilizer

    if A.degree != B.degree:
        raise ValueError("degree mismatch")
    A, B = _try_witness(A), _try_witness(B)
    if A.witness is None and B.witness is None:
        raise WitnessError("intersection needs a solvable witness on at least one side")
    d = A.degree
    P = direct_product_group(A, B)
    diag = [x * d + x for x in range(d)]
    S = set_stabilizer(P, diag, action=PairAction(d))
    gens = [g[:d] for g in S.gens]
    wit = None
    if S.witness is not None:
        wit = SolvableWitness(tuple(g[:d] for g in S.witness.gens), S.witness.index_bound)
    return PermGroup(gens, d, witness=wit)


def lex_min_in_coset(K: PermGroup, s: Perm) -> Perm:
    """Lexicographically least image array among ``{k s : k in K}``."""
    n = K.degree
    chain = StabChain(n, base=range(n))
    for g in K.gens:
        chain.add(g)
    s = tuple(s)
    for L in chain.levels:
        best = min(L.orbit, key=lambda beta: s[beta])
        s = mul(L.trans[best][0], s)
    return s


def inherit_witness(S: PermGroup, G: PermGroup) -> PermGroup:
    """``S <= G`` with witness ``S ∩ R`` derived from ``G``'s witness ``R``."""
    if G.witness is None:
        return S
    R = witness_group(G)
    if R.order == G.order:
        return full_witness(S)
    W = normal_intersection(S, R, coset_transversal(G, R))
    return S.with_witness(SolvableWitness(W.gens, S.order // W.order))
