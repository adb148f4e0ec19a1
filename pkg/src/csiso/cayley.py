"""Finite groups given by multiplication tables, and the subgroup-level
constructions the lifting machinery consumes.

Elements are the integers ``0..n-1`` and the identity is always ``0``.
Subgroups are explicit sorted element tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .perm import Perm


class GroupError(ValueError):
    """Raised when a table, subgroup or homomorphism fails validation."""


class CayleyGroup:
    """A group of order ``n`` as an ``n x n`` table with ``table[i, j] = i*j``."""

    def __init__(self, table, name: str = "", *, check: bool = True):
        arr = np.array(table, dtype=np.intp)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupError("table must be a non-empty square array")
        n = arr.shape[0]
        if check:
            _check_latin(arr)
            if not (np.array_equal(arr[0], np.arange(n)) and np.array_equal(arr[:, 0], np.arange(n))):
                raise GroupError("element 0 is not a two-sided identity")
        arr.setflags(write=False)
        self.table = arr
        self.name = name
        self.order = n
        self.identity = 0
        inv = np.argmax(arr == 0, axis=1)
        if check and not np.all(arr[np.arange(n), inv] == 0):
            raise GroupError("some element has no inverse")
        inv.setflags(write=False)
        self.inverse = inv
        self.rows = arr.tolist()
        self.inv_list = inv.tolist()

    def __repr__(self) -> str:
        return f"CayleyGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def conj(self, h: int, x: int) -> int:
        """``x^-1 h x``."""
        return self.rows[self.rows[self.inv_list[x]][h]][x]

    def is_associative(self) -> bool:
        t = self.table
        # (ab)c vs a(bc) for all triples, one slice of a at a time to bound memory
        for a in range(self.order):
            if not np.array_equal(t[t[a]], t[a][t]):
                return False
        return True

    def verify(self) -> None:
        if not self.is_associative():
            raise GroupError(f"table of {self.name or 'group'} is not associative")

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = self.rows[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))


def _check_latin(arr: np.ndarray) -> None:
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise GroupError("table entries out of range")
    target = np.arange(n)
    if not np.all(np.sort(arr, axis=1) == target):
        bad = int(np.nonzero(~np.all(np.sort(arr, axis=1) == target, axis=1))[0][0])
        raise GroupError(f"row {bad} is not a permutation (not a Latin square)")
    if not np.all(np.sort(arr, axis=0) == target[:, None]):
        bad = int(np.nonzero(~np.all(np.sort(arr, axis=0) == target[:, None], axis=0))[0][0])
        raise GroupError(f"column {bad} is not a permutation (not a Latin square)")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: CayleyGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        if not self.elements or self.elements[0] != 0:
            raise GroupError("subgroup must contain the identity")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.parent is other.parent and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[list(self.elements)]))

    def __lt__(self, other: "Subgroup") -> bool:
        return self.order < other.order and self <= other

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} in {self.parent!r})"

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    @cached_property
    def position(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def is_closed(self) -> bool:
        t = self.parent.table
        els = np.array(self.elements)
        return bool(self.mask[t[np.ix_(els, els)]].all() and self.mask[self.parent.inverse[els]].all())

    @cached_property
    def is_abelian(self) -> bool:
        t = self.parent.table
        els = np.array(self.elements)
        block = t[np.ix_(els, els)]
        return bool(np.array_equal(block, block.T))


def make_subgroup(G: CayleyGroup, elements: Iterable[int], *, check: bool = True) -> Subgroup:
    els = tuple(sorted(set(int(x) for x in elements)))
    if els and (els[0] < 0 or els[-1] >= G.order):
        raise GroupError("element index out of range")
    S = Subgroup(G, els)
    if check:
        if not S.is_closed():
            raise GroupError("element set is not closed under product and inverse")
        if G.order % S.order:
            raise GroupError("subgroup order does not divide group order")
    return S


@dataclass(frozen=True, eq=False)
class GroupHom:
    domain: CayleyGroup
    codomain: CayleyGroup
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def is_homomorphism(self) -> bool:
        img = np.array(self.image)
        if img[0] != 0:
            return False
        return bool(np.array_equal(img[self.domain.table], self.codomain.table[np.ix_(img, img)]))

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and len(set(self.image)) == self.domain.order

    def verify(self) -> None:
        if not self.is_homomorphism():
            raise GroupError("map is not a homomorphism")

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, tuple(i for i, y in enumerate(self.image) if y == 0))


def _check_indices(G: CayleyGroup, seeds: Iterable[int]) -> list[int]:
    out = [int(s) for s in seeds]
    for s in out:
        if not 0 <= s < G.order:
            raise GroupError(f"element index {s} out of range for order {G.order}")
    return out


def _closure_mask(G: CayleyGroup, seeds: list[int]) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if not seeds:
        return mask
    seeds_arr = np.unique(np.array(seeds, dtype=np.intp))
    frontier = np.array([0])
    t = G.table
    while frontier.size:
        new = np.unique(t[np.ix_(frontier, seeds_arr)])
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def subgroup_generated(G: CayleyGroup, seeds: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seeds`` (closure under right multiplication)."""
    mask = _closure_mask(G, _check_indices(G, seeds))
    return Subgroup(G, tuple(np.nonzero(mask)[0].tolist()))


def normal_closure(G: CayleyGroup, seeds: Iterable[int]) -> Subgroup:
    seeds = _check_indices(G, seeds)
    if not seeds:
        return G.trivial
    s = np.array(seeds)
    everything = np.arange(G.order)
    # x^-1 s x for every x and every seed
    conjugates = G.table[G.table[G.inverse[everything][:, None], s[None, :]], everything[:, None]]
    return subgroup_generated(G, np.unique(conjugates).tolist())


def join(G: CayleyGroup, *subgroups: Subgroup) -> Subgroup:
    return subgroup_generated(G, [x for S in subgroups for x in S.elements])


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.parent, tuple(x for x in A.elements if B.mask[x]))


def centralizer(G: CayleyGroup, H: Subgroup) -> Subgroup:
    if H.parent is not G:
        raise GroupError("H is not a subgroup of G")
    t = G.table
    h = np.array(H.elements)
    commute = np.all(t[:, h] == t[h, :].T, axis=1)
    return Subgroup(G, tuple(np.nonzero(commute)[0].tolist()))


def center(H: Subgroup) -> Subgroup:
    t = H.parent.table
    h = np.array(H.elements)
    commute = np.all(t[np.ix_(h, h)] == t[np.ix_(h, h)].T, axis=1)
    return Subgroup(H.parent, tuple(h[commute].tolist()))


def is_normal(G: CayleyGroup, H: Subgroup) -> bool:
    t = G.table
    h = np.array(H.elements)
    everything = np.arange(G.order)
    conj = t[t[G.inverse[:, None], h[None, :]], everything[:, None]]
    return bool(H.mask[conj].all())


def inn_restriction(G: CayleyGroup, H: Subgroup, x: int) -> Perm:
    """Conjugation ``h -> x^-1 h x`` as a permutation of positions in ``H.elements``."""
    pos = H.position
    try:
        return tuple(pos[G.conj(h, x)] for h in H.elements)
    except KeyError:
        raise GroupError(f"element {x} does not normalize H") from None


@dataclass(frozen=True, eq=False)
class Cosets:
    """Right cosets ``Hx``, ordered by their minimal element; block 0 is ``H``."""

    subgroup: Subgroup
    blocks: tuple[tuple[int, ...], ...]
    coset_of: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def reps(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.blocks)


def cosets(G: CayleyGroup, H: Subgroup) -> Cosets:
    t = G.table
    h = np.array(H.elements)
    label = np.full(G.order, -1, dtype=np.intp)
    blocks = []
    for x in range(G.order):
        if label[x] >= 0:
            continue
        members = np.sort(t[h, x])
        label[members] = len(blocks)
        blocks.append(tuple(members.tolist()))
    return Cosets(H, tuple(blocks), tuple(label.tolist()))


def quotient(G: CayleyGroup, H: Subgroup, name: str | None = None) -> tuple[CayleyGroup, GroupHom]:
    if not is_normal(G, H):
        raise GroupError("quotient by a non-normal subgroup")
    cs = cosets(G, H)
    reps = np.array(cs.reps)
    label = np.array(cs.coset_of)
    table = label[G.table[np.ix_(reps, reps)]]
    Q = CayleyGroup(table, name if name is not None else f"{G.name}/{H.order}", check=False)
    return Q, GroupHom(G, Q, cs.coset_of)


def subcayley(S: Subgroup, name: str | None = None) -> CayleyGroup:
    """``S`` as a group in its own right; element ``k`` is ``S.elements[k]``."""
    G = S.parent
    els = np.array(S.elements)
    lookup = np.full(G.order, -1, dtype=np.intp)
    lookup[els] = np.arange(len(els))
    table = lookup[G.table[np.ix_(els, els)]]
    return CayleyGroup(table, name if name is not None else f"{G.name}[{S.order}]", check=False)


def relabel_into(S: Subgroup, T: Subgroup, sub: CayleyGroup) -> Subgroup:
    """``T <= S`` re-expressed inside ``sub = subcayley(S)``."""
    pos = S.position
    return Subgroup(sub, tuple(sorted(pos[x] for x in T.elements)))


@dataclass(frozen=True, eq=False)
class DirectProduct:
    group: CayleyGroup
    embed1: GroupHom
    embed2: GroupHom
    factor1: Subgroup
    factor2: Subgroup

    def pair(self, a: int, b: int) -> int:
        return a * self.embed2.domain.order + b

    def split(self, x: int) -> tuple[int, int]:
        return divmod(x, self.embed2.domain.order)


def direct_product(G1: CayleyGroup, G2: CayleyGroup, name: str | None = None) -> DirectProduct:
    n1, n2 = G1.order, G2.order
    t = (G1.table[:, None, :, None] * n2 + G2.table[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    P = CayleyGroup(t, name if name is not None else f"{G1.name}x{G2.name}", check=False)
    e1 = GroupHom(G1, P, tuple(a * n2 for a in range(n1)))
    e2 = GroupHom(G2, P, tuple(range(n2)))
    return DirectProduct(P, e1, e2, Subgroup(P, e1.image), Subgroup(P, e2.image))


def generating_set(S: Subgroup) -> list[int]:
    """Greedy small generating set: repeatedly add the element enlarging the span most."""
    G = S.parent
    gens: list[int] = []
    span = G.trivial
    while span.order < S.order:
        best = None
        for x in S.elements:
            if span.mask[x]:
                continue
            size = subgroup_generated(G, gens + [x]).order
            if best is None or size > best[0]:
                best = (size, x)
                if size == S.order:
                    break
        gens.append(best[1])
        span = subgroup_generated(G, gens)
    return gens


def minimal_normal_subgroups(G: CayleyGroup) -> list[Subgroup]:
    closures: dict[tuple[int, ...], Subgroup] = {}
    for x in range(1, G.order):
        N = normal_closure(G, [x])
        closures.setdefault(N.elements, N)
    cands = sorted(closures.values(), key=lambda N: (N.order, N.elements))
    out = []
    for N in cands:
        if not any(M < N for M in out):
            out.append(N)
    return out


def normal_subgroups(G: CayleyGroup) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, elements)."""
    found: dict[tuple[int, ...], Subgroup] = {(0,): G.trivial}
    base = {}
    for x in range(1, G.order):
        N = normal_closure(G, [x])
        base.setdefault(N.elements, N)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for N in frontier:
            for M in base.values():
                if M <= N:
                    continue
                J = join(G, N, M)
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda N: (N.order, N.elements))


def maximal_normal_subgroups(G: CayleyGroup) -> list[Subgroup]:
    if G.order == 1:
        return []
    proper = [N for N in normal_subgroups(G) if N.order < G.order]
    return [N for N in proper if not any(N < M for M in proper)]


def is_simple(G: CayleyGroup) -> bool:
    if G.order == 1:
        return False
    return all(normal_closure(G, [x]).order == G.order for x in range(1, G.order))


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_characteristically_simple(G: CayleyGroup) -> list[Subgroup] | None:
    """Factor decomposition ``G = T_1 x ... x T_k`` with isomorphic simple ``T_i``, else None."""
    if G.order == 1:
        return None
    if G.is_abelian:
        primes = set(_prime_factors(G.order))
        if len(primes) != 1:
            return None
        p = primes.pop()
        if any(o not in (1, p) for o in G.element_orders):
            return None
        factors: list[Subgroup] = []
        span = G.trivial
        for x in range(1, G.order):
            if not span.mask[x]:
                factors.append(subgroup_generated(G, [x]))
                span = subgroup_generated(G, [f.elements[1] for f in factors])
        return factors
    mins = minimal_normal_subgroups(G)
    if not all(is_simple(subcayley(M)) for M in mins):
        return None
    if len({M.order for M in mins}) != 1:
        return None
    total = 1
    for M in mins:
        total *= M.order
    if total != G.order or join(G, *mins).order != G.order:
        return None
    T0 = subcayley(mins[0])
    if not all(next(isomorphisms(T0, subcayley(M)), None) is not None for M in mins[1:]):
        return None
    return mins


def _extend_map(G1: CayleyGroup, G2: CayleyGroup, gens: Sequence[int], imgs: Sequence[int]) -> list[int] | None:
    """Extend ``gens[i] -> imgs[i]`` to a homomorphism on <gens>, or None if inconsistent."""
    r1, r2 = G1.rows, G2.rows
    img = [-1] * G1.order
    img[0] = 0
    queue = [0]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        y = img[x]
        for g, z in zip(gens, imgs):
            xg = r1[x][g]
            yz = r2[y][z]
            if img[xg] == -1:
                img[xg] = yz
                queue.append(xg)
            elif img[xg] != yz:
                return None
    return img


def homomorphisms_from_generators(G1: CayleyGroup, G2: CayleyGroup, gens: Sequence[int], injective: bool):
    o1, o2 = G1.element_orders, G2.element_orders
    cands = []
    for g in gens:
        if injective:
            cands.append([y for y in range(G2.order) if o2[y] == o1[g]])
        else:
            cands.append([y for y in range(G2.order) if o1[g] % o2[y] == 0])
    for imgs in itertools.product(*cands):
        img = _extend_map(G1, G2, gens, imgs)
        if img is None:
            continue
        if injective and len(set(img)) != G1.order:
            continue
        yield tuple(img)


def isomorphisms(G1: CayleyGroup, G2: CayleyGroup):
    """Yield every isomorphism ``G1 -> G2`` as an image tuple (generator-image search)."""
    if G1.order != G2.order or sorted(G1.element_orders) != sorted(G2.element_orders):
        return
    gens = generating_set(G1.whole)
    yield from homomorphisms_from_generators(G1, G2, gens, injective=True)


def automorphism_list(G: CayleyGroup) -> list[Perm]:
    """All automorphisms of ``G`` as permutations of its elements; identity first."""
    out = sorted(isomorphisms(G, G))
    return out
