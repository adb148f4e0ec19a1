"""Permutations as image tuples.

A permutation of degree ``d`` is a tuple ``p`` with ``p[i]`` the image of
point ``i``.  Permutations act on the right: ``mul(p, q)`` first applies
``p`` and then ``q``, so ``mul(p, q)[i] == q[p[i]]``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Perm = tuple  # tuple[int, ...]


_IDENTITIES: dict[int, Perm] = {}


def identity(degree: int) -> Perm:
    e = _IDENTITIES.get(degree)
    if e is None:
        e = _IDENTITIES[degree] = tuple(range(degree))
    return e


def is_identity(p: Sequence[int]) -> bool:
    if type(p) is not tuple:
        p = tuple(p)
    return p == identity(len(p))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(map(q.__getitem__, p))


def mul_all(perms: Iterable[Perm], degree: int) -> Perm:
    out = identity(degree)
    for p in perms:
        out = mul(out, p)
    return out


def inv(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def conj(p: Perm, x: Perm) -> Perm:
    """``x^-1 p x``."""
    return mul(mul(inv(x), p), x)


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {list(p)!r}")


def from_cycles(degree: int, *cycles: Sequence[int]) -> Perm:
    out = list(range(degree))
    for cyc in cycles:
        for i, x in enumerate(cyc):
            out[x] = cyc[(i + 1) % len(cyc)]
    check_perm(out)
    return tuple(out)


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def fmt(p: Sequence[int]) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def support_min(p: Sequence[int]) -> int:
    """Smallest moved point, or -1 for the identity."""
    for i, x in enumerate(p):
        if i != x:
            return i
    return -1


def order(p: Sequence[int]) -> int:
    from math import lcm

    out = 1
    for c in cycles(p):
        out = lcm(out, len(c))
    return out
