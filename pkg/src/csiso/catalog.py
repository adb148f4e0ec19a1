"""Named small groups as Cayley tables, and relabeling helpers."""

from __future__ import annotations

import random
from itertools import permutations, product
from typing import Callable, Hashable, Sequence

import numpy as np

from .cayley import CayleyGroup, direct_product
from .perm import identity as perm_identity, mul as perm_mul


def from_elements(elements: Sequence[Hashable], op: Callable, name: str) -> CayleyGroup:
    """Table of ``op`` on ``elements``; ``elements[0]`` must be the identity."""
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[op(a, b)] for b in elements] for a in elements]
    return CayleyGroup(table, name)


def closure_of_perms(gens: Sequence[tuple], name: str) -> CayleyGroup:
    degree = len(gens[0]) if gens else 1
    e = perm_identity(degree)
    seen = {e: None}
    order = [e]
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        for g in gens:
            y = perm_mul(x, g)
            if y not in seen:
                seen[y] = None
                order.append(y)
    els = [e] + sorted(x for x in order if x != e)
    return from_elements(els, perm_mul, name)


def cyclic(n: int) -> CayleyGroup:
    return CayleyGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}")


def abelian(*ns: int) -> CayleyGroup:
    elements = list(product(*[range(n) for n in ns]))
    return from_elements(
        elements,
        lambda a, b: tuple((x + y) % n for x, y, n in zip(a, b, ns)),
        "x".join(f"C{n}" for n in ns),
    )


def dihedral(n: int) -> CayleyGroup:
    """Symmetries of the n-gon (order ``2n``): pairs (i, s) meaning r^i f^s."""
    elements = [(i, s) for s in (0, 1) for i in range(n)]

    def op(a, b):
        i, s = a
        j, t = b
        return ((i + (j if s == 0 else -j)) % n, s ^ t)

    return from_elements(elements, op, f"D{n}")


def dicyclic(n: int) -> CayleyGroup:
    """Dicyclic group of order ``4n``: <a, x | a^2n, x^2 = a^n, x^-1 a x = a^-1>."""
    m = 2 * n
    elements = [(i, s) for s in (0, 1) for i in range(m)]

    def op(a, b):
        i, s = a
        j, t = b
        if s == 0:
            return ((i + j) % m, t)
        k = (i - j) % m
        if t == 1:  # a^i x a^j x = a^(i-j) x^2 = a^(i-j+n)
            return ((k + n) % m, 0)
        return (k, 1)

    return from_elements(elements, op, "Q8" if n == 2 else f"Dic{n}")


def quaternion() -> CayleyGroup:
    return dicyclic(2)


def semidirect_c3_c4() -> CayleyGroup:
    """C3 x| C4 with the generator of C4 inverting C3; pairs (c3, c4)."""
    elements = [(a, b) for b in range(4) for a in range(3)]

    def op(x, y):
        a, b = x
        c, d = y
        sign = 1 if b % 2 == 0 else -1
        return ((a + sign * c) % 3, (b + d) % 4)

    return from_elements(elements, op, "C3:C4")


def symmetric(k: int) -> CayleyGroup:
    els = sorted(permutations(range(k)))
    return from_elements(els, perm_mul, f"S{k}")


def alternating(k: int) -> CayleyGroup:
    def even(p):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if p[i] > p[j])
        return inv % 2 == 0

    els = sorted(p for p in permutations(range(k)) if even(p))
    return from_elements(els, perm_mul, f"A{k}")


def relabeled(G: CayleyGroup, seed: int | None = None, mapping: Sequence[int] | None = None) -> tuple[CayleyGroup, tuple[int, ...]]:
    """Isomorphic copy of ``G``; returns the copy and ``f`` with ``f[old] = new`` (``f[0] = 0``)."""
    n = G.order
    if mapping is None:
        rest = list(range(1, n))
        random.Random(seed).shuffle(rest)
        mapping = [0] + rest
    f = np.array(mapping, dtype=np.intp)
    inv = np.empty(n, dtype=np.intp)
    inv[f] = np.arange(n)
    table = f[G.table[np.ix_(inv, inv)]]
    return CayleyGroup(table, f"{G.name}'"), tuple(int(x) for x in f)


def catalog() -> dict[str, CayleyGroup]:
    """The fixture catalog: every group has order at most 24."""
    out: dict[str, CayleyGroup] = {}
    for n in range(2, 17):
        out[f"C{n}"] = cyclic(n)
    out["C2xC2"] = abelian(2, 2)
    out["C2xC4"] = abelian(2, 4)
    out["C2xC2xC2"] = abelian(2, 2, 2)
    out["C3xC3"] = abelian(3, 3)
    out["S3"] = symmetric(3)
    out["D4"] = dihedral(4)
    out["Q8"] = quaternion()
    out["D5"] = dihedral(5)
    out["D6"] = dihedral(6)
    out["A4"] = alternating(4)
    out["Dic3"] = dicyclic(3)
    out["C3:C4"] = semidirect_c3_c4()
    out["S4"] = symmetric(4)
    for name, G in out.items():
        G.name = name
    return out


def product_group(G1: CayleyGroup, G2: CayleyGroup) -> CayleyGroup:
    return direct_product(G1, G2).group


def regular_permgroup(G: CayleyGroup):
    """Right regular representation of ``G`` as a permutation group on its elements."""
    from .permgroup import PermGroup

    return PermGroup([tuple(G.table[:, x].tolist()) for x in range(1, G.order)], G.order)


def perm_fixtures() -> dict:
    """Solvable permutation groups of degree at most 8 used for set-stabilizer checks."""
    from .perm import from_cycles as c
    from .permgroup import PermGroup

    out = {
        "C4": PermGroup([c(4, (0, 1, 2, 3))]),
        "D4": PermGroup([c(4, (0, 1, 2, 3)), c(4, (0, 2))]),
        "S4": PermGroup([c(4, (0, 1, 2, 3)), c(4, (0, 1))]),
        "A4": PermGroup([c(4, (0, 1, 2)), c(4, (1, 2, 3))]),
        "C2wrC2wrC2": PermGroup([c(8, (0, 1)), c(8, (0, 2), (1, 3)), c(8, (0, 4), (1, 5), (2, 6), (3, 7))]),
        "C8": PermGroup([c(8, tuple(range(8)))]),
        "C7:C3": PermGroup([c(8, (0, 1, 2, 3, 4, 5, 6)), c(8, (1, 2, 4), (3, 6, 5))]),
        "S4xC3": PermGroup([c(8, (0, 1, 2, 3)), c(8, (0, 1)), c(8, (4, 5, 6))]),
        "S3xS3": PermGroup([c(6, (0, 1, 2)), c(6, (0, 1)), c(6, (3, 4, 5)), c(6, (3, 4))]),
        "AGL(1,5)": PermGroup([c(5, (0, 1, 2, 3, 4)), c(5, (1, 2, 4, 3))]),
    }
    for name, G in catalog().items():
        if G.order <= 8:
            out[f"reg({name})"] = regular_permgroup(G)
    return out
