"""Brute-force ground truth.

Everything here is exhaustive search over small inputs and deliberately
shares nothing with the solvers beyond the table type and permutation
composition.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .cayley import CayleyGroup
from .perm import Perm, mul


def _closure(G: CayleyGroup, seeds: Iterable[int]) -> frozenset[int]:
    rows = G.rows
    seen = {0}
    frontier = [0]
    seeds = list(seeds)
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = rows[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _generators(G: CayleyGroup) -> list[int]:
    gens: list[int] = []
    span = frozenset([0])
    while len(span) < G.order:
        x = min(set(range(G.order)) - span)
        gens.append(x)
        span = _closure(G, gens)
    return gens


def _orders(G: CayleyGroup) -> list[int]:
    out = []
    for x in range(G.order):
        k, y = 1, x
        while y != 0:
            y = G.rows[y][x]
            k += 1
        out.append(k)
    return out


def _word_map(G1: CayleyGroup, G2: CayleyGroup, gens: Sequence[int], imgs: Sequence[int]) -> list[int] | None:
    """Extend ``gens -> imgs`` to a homomorphism by closure, or None on conflict."""
    f = [-1] * G1.order
    f[0] = 0
    queue = [0]
    r1, r2 = G1.rows, G2.rows
    for x in queue:
        for g, h in zip(gens, imgs):
            y = r1[x][g]
            v = r2[f[x]][h]
            if f[y] == -1:
                f[y] = v
                queue.append(y)
            elif f[y] != v:
                return None
    if -1 in f:
        return None
    # closure on generators only checks x*g; confirm the map is multiplicative
    for a in range(G1.order):
        fa = f[a]
        ra = r1[a]
        for b in range(G1.order):
            if f[ra[b]] != r2[fa][f[b]]:
                return None
    return f


def all_isomorphisms(G1: CayleyGroup, G2: CayleyGroup) -> list[Perm]:
    """Every isomorphism ``G1 -> G2`` as an image array, sorted."""
    if G1.order != G2.order:
        return []
    gens = _generators(G1)
    o1, o2 = _orders(G1), _orders(G2)
    cands = [[y for y in range(G2.order) if o2[y] == o1[g]] for g in gens]
    out = []

    def rec(i, chosen):
        if i == len(gens):
            f = _word_map(G1, G2, gens, chosen)
            if f is not None and len(set(f)) == G1.order:
                out.append(tuple(f))
            return
        for y in cands[i]:
            if y in chosen:
                continue
            # prune: the partial map must already extend on the generated subgroup
            part = chosen + [y]
            if _partial_ok(G1, G2, gens[: i + 1], part):
                rec(i + 1, part)

    rec(0, [])
    return sorted(out)


def _partial_ok(G1: CayleyGroup, G2: CayleyGroup, gens: Sequence[int], imgs: Sequence[int]) -> bool:
    f = {0: 0}
    queue = [0]
    r1, r2 = G1.rows, G2.rows
    for x in queue:
        for g, h in zip(gens, imgs):
            y = r1[x][g]
            v = r2[f[x]][h]
            if y not in f:
                f[y] = v
                queue.append(y)
            elif f[y] != v:
                return False
    return len(set(f.values())) == len(f)


def all_automorphisms(G: CayleyGroup) -> list[Perm]:
    return all_isomorphisms(G, G)


def _as_sets(terms: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    return [frozenset(int(x) for x in (t.elements if hasattr(t, "elements") else t)) for t in terms]


def aut_fixing_series(G: CayleyGroup, terms: Iterable[Iterable[int]]) -> list[Perm]:
    """Automorphisms mapping every listed subgroup onto itself."""
    sets = _as_sets(terms)
    return [f for f in all_automorphisms(G) if all(frozenset(f[x] for x in s) == s for s in sets)]


def iso_matching_series(G1: CayleyGroup, terms1, G2: CayleyGroup, terms2) -> list[Perm]:
    """Isomorphisms ``G1 -> G2`` carrying ``terms1[i]`` onto ``terms2[i]``."""
    s1, s2 = _as_sets(terms1), _as_sets(terms2)
    if len(s1) != len(s2):
        return []
    return [f for f in all_isomorphisms(G1, G2)
            if all(frozenset(f[x] for x in a) == b for a, b in zip(s1, s2))]


def perm_closure(gens: Iterable[Sequence[int]], degree: int) -> set[Perm]:
    """All elements of the group generated by ``gens``."""
    gens = [tuple(g) for g in gens]
    e = tuple(range(degree))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _gens_degree(G) -> tuple[list[Perm], int]:
    if hasattr(G, "gens"):
        return list(G.gens), G.degree
    gens = [tuple(g) for g in G]
    return gens, len(gens[0])


def brute_set_stabilizer(G, delta: Iterable[int]) -> list[Perm]:
    """Elements ``g`` with ``delta^g = delta``; ``G`` is a group or a generator list."""
    gens, d = _gens_degree(G)
    D = frozenset(delta)
    return sorted(g for g in perm_closure(gens, d) if frozenset(g[x] for x in D) == D)


def brute_set_transporter(G, delta: Iterable[int], lam: Iterable[int]) -> list[Perm]:
    gens, d = _gens_degree(G)
    D, L = frozenset(delta), frozenset(lam)
    return sorted(g for g in perm_closure(gens, d) if frozenset(g[x] for x in D) == L)


# -- subgroup structure by exhaustion ----------------------------------------

def all_subgroups(G: CayleyGroup) -> set[frozenset[int]]:
    cyc = {_closure(G, [x]) for x in range(G.order)}
    subs = set(cyc)
    frontier = set(cyc)
    while frontier:
        nxt = set()
        for A in frontier:
            for c in cyc:
                if not c <= A:
                    J = _closure(G, list(A | c))
                    if J not in subs:
                        subs.add(J)
                        nxt.add(J)
        frontier = nxt
    return subs


def _normal_in(G: CayleyGroup, M: frozenset[int], N: frozenset[int]) -> bool:
    rows, inv = G.rows, G.inv_list
    return all(rows[rows[inv[m]][n]][m] in N for m in M for n in N)


def composition_series_brute(G: CayleyGroup) -> set[tuple[frozenset[int], ...]]:
    """All composition series, as tuples of element sets from ``G`` down to 1."""
    subs = all_subgroups(G)
    by_parent: dict[frozenset[int], list[frozenset[int]]] = {}

    def maximal_normals(M):
        if M not in by_parent:
            normals = [N for N in subs if N < M and _normal_in(G, M, N)]
            by_parent[M] = [N for N in normals
                            if not any(N < K for K in normals)]
        return by_parent[M]

    out = set()

    def rec(chain):
        top = chain[-1]
        if len(top) == 1:
            out.add(tuple(chain))
            return
        for N in maximal_normals(top):
            rec(chain + [N])

    rec([frozenset(range(G.order))])
    return out


def is_automorphism(G: CayleyGroup, f: Sequence[int]) -> bool:
    n = G.order
    if sorted(f) != list(range(n)):
        return False
    rows = G.rows
    return all(f[rows[a][b]] == rows[f[a]][f[b]] for a in range(n) for b in range(n))
