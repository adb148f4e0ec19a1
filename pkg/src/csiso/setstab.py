"""Set stabilizers and set transporters by divide and conquer over cosets.

The recursion works on a coset ``X = G a`` and a ``G``-stable window ``Π`` and
returns ``X_{Δ|Π} = {x in X : (Δ∩Π)^x = Δ ∩ Π^a}`` as a coset or ``None``:

* if ``G`` already stabilizes ``Δ∩Π`` the answer is ``X`` or ``None`` by
  looking at ``a`` alone (this covers ``|Π| = 1``);
* an intransitive window is handled one orbit after another;
* a transitive window is split into blocks on which ``G`` acts
  primitively, and the answer is the union over the cosets of the block
  kernel.

Actions other than the natural one are supported through small action
objects that map a group element and an array of points to image points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .perm import Perm, identity, inv, mul
from .permgroup import (
    ActionHom,
    PermGroup,
    SolvableWitness,
    WitnessError,
    block_labels,
    coset_transversal,
    coset_union,
    ensure_witness,
    inherit_witness,
    witness_group,
)

log = logging.getLogger(__name__)

__all__ = [
    "Action", "ProductAction", "NaturalAction", "PairAction", "DiagonalAction",
    "TripleAction", "WreathAction", "GroupCoset", "StabTask", "stab_coset",
    "set_stabilizer", "set_transporter", "coset_transporter", "WitnessError",
]


class Action:
    """Action of a permutation group on ``0..size-1``."""

    size: int

    def images(self, g: Sequence[int], pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def images_many(self, gens: Sequence[Sequence[int]], pts: np.ndarray) -> np.ndarray:
        """Images of ``pts`` under each of ``gens``, one row per generator."""
        return np.stack([self.images(g, pts) for g in gens])


class ProductAction(Action):
    """Coordinatewise action on a mixed-radix product of point ranges.

    Coordinate ``j`` ranges over ``sizes[j]`` values and a group element ``g``
    moves it to ``g[offsets[j] + c] - offsets[j]``.  The most significant
    coordinate comes first.
    """

    def __init__(self, sizes: Sequence[int], offsets: Sequence[int]):
        self.sizes = tuple(int(s) for s in sizes)
        self.offsets = tuple(int(o) for o in offsets)
        self.size = prod(self.sizes)
        self._weights = [prod(self.sizes[j + 1:]) for j in range(len(self.sizes))]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(sizes={self.sizes}, offsets={self.offsets})"

    @cached_property
    def _digits(self) -> list[np.ndarray]:
        # coordinate j of every point, already shifted by its offset
        allpts = np.arange(self.size, dtype=np.intp)
        return [(allpts // w) % size + off
                for size, off, w in zip(self.sizes, self.offsets, self._weights)]

    def images(self, g, pts):
        return self.images_many([g], pts)[0]

    def images_many(self, gens, pts):
        garr = np.asarray(gens, dtype=np.intp).reshape(len(gens), -1)
        pts = np.asarray(pts, dtype=np.intp)
        out = np.zeros((len(gens), pts.size), dtype=np.intp)
        for digit, off, w in zip(self._digits, self.offsets, self._weights):
            out += (garr[:, digit[pts]] - off) * w
        return out


class NaturalAction(ProductAction):
    def __init__(self, degree: int):
        super().__init__((degree,), (0,))

    def images(self, g, pts):
        return np.asarray(g, dtype=np.intp)[np.asarray(pts, dtype=np.intp)]

    def images_many(self, gens, pts):
        return np.asarray(gens, dtype=np.intp).reshape(len(gens), -1)[:, np.asarray(pts, dtype=np.intp)]


class PairAction(ProductAction):
    """``A x B`` on ``Ω x Ω``: a group on ``2d`` points, first factor on the low half."""

    def __init__(self, d: int):
        super().__init__((d, d), (0, d))


class DiagonalAction(ProductAction):
    """A group on ``m`` points acting on ``k``-tuples of points."""

    def __init__(self, m: int, k: int = 2):
        super().__init__((m,) * k, (0,) * k)


class TripleAction(DiagonalAction):
    """Action on ``G x G x G`` used to stabilize the multiplication graph."""

    def __init__(self, n: int):
        super().__init__(n, 3)


class WreathAction(Action):
    """``G wr C2`` (a group on ``2d`` points) on two copies of a base action's domain."""

    def __init__(self, base: Action, d: int):
        self.base = base
        self.d = d
        self.size = 2 * base.size

    def images(self, x, pts):
        x = np.asarray(x, dtype=np.intp)
        pts = np.asarray(pts, dtype=np.intp)
        d, N = self.d, self.base.size
        swap = bool(x[0] >= d)
        g1, g2 = x[:d] % d, x[d:] % d
        out = np.empty_like(pts)
        lo = pts < N
        out[lo] = self.base.images(g1, pts[lo]) + (N if swap else 0)
        out[~lo] = self.base.images(g2, pts[~lo] - N) + (0 if swap else N)
        return out


@dataclass(frozen=True)
class GroupCoset:
    """The right coset ``group * rep``; ``None`` stands for the empty set."""

    group: PermGroup
    rep: Perm

    def __contains__(self, x) -> bool:
        return self.group.contains(mul(tuple(x), inv(self.rep)))

    def elements(self) -> Iterator[Perm]:
        for g in self.group.elements():
            yield mul(g, self.rep)

    @property
    def order(self) -> int:
        return self.group.order


@dataclass
class StabTask:
    """Compute ``X_{Δ|Π}`` for ``X = coset``."""

    coset: GroupCoset
    delta: frozenset
    window: Sequence[int] | None = None
    action: Action | None = None


@dataclass
class _Stats:
    nodes: int = 0
    max_fanout: int = 0


class _Engine:
    def __init__(self, action: Action, delta: Iterable[int]):
        self.action = action
        mask = np.zeros(action.size, dtype=bool)
        idx = np.fromiter((int(x) for x in delta), dtype=np.intp)
        if idx.size and (idx.min() < 0 or idx.max() >= action.size):
            raise ValueError("point outside the action domain")
        mask[idx] = True
        self.delta = mask
        self.stats = _Stats()

    def _images(self, G: PermGroup, window: np.ndarray) -> np.ndarray:
        if not G.gens:
            return np.zeros((0, window.size), dtype=np.intp)
        return self.action.images_many(G.gens_array(), window)

    def split(self, G: PermGroup, a: Perm, window: np.ndarray):
        """``(G a)_{Δ|Π}`` as ``(group, rep)`` or None."""
        self.stats.nodes += 1
        delta = self.delta
        while window.size:
            imgs = self._images(G, window)
            dwin = delta[window]
            if imgs.shape[0]:
                bad = (delta[imgs] != dwin).any(axis=0)
                local = np.searchsorted(window, imgs)
                labels = kernels.orbit_labels(local)
            else:
                bad = np.zeros(window.size, dtype=bool)
                labels = np.arange(window.size, dtype=np.intp)
            bad_labels = np.unique(labels[bad])
            inbad = np.isin(labels, bad_labels)
            good = window[~inbad]
            if good.size and (delta[good] != delta[self.action.images(a, good)]).any():
                return None
            if bad_labels.size == 0:
                return G, a
            # orbits of the current group, least point first; recompute once it shrinks
            order0 = G.order
            rest = inbad.copy()
            for lab in bad_labels:
                sel = labels == lab
                res = self.transitive(G, a, window[sel])
                if res is None:
                    return None
                G, a = res
                rest &= ~sel
                if G.order != order0:
                    break
            window = window[rest]
        return G, a

    def transitive(self, G: PermGroup, a: Perm, orbit: np.ndarray):
        w = orbit.size
        local = np.searchsorted(orbit, self._images(G, orbit))
        labels = block_labels(local, w)
        nb = int(labels.max()) + 1
        first_idx = np.unique(labels, return_index=True)[1]
        rep_pts = orbit[first_idx]
        act_images = self.action.images

        def act(g):
            return tuple(labels[np.searchsorted(orbit, act_images(g, rep_pts))].tolist())

        hom = ActionHom(G, act, nb)
        H = hom.kernel
        T = hom.lifted_transversal()
        self.stats.max_fanout = max(self.stats.max_fanout, len(T))
        if len(T) > 64:
            log.debug("set-stabilizer fan-out %d on %d blocks of %d points", len(T), nb, w)
        first = None
        extra: list[Perm] = []
        for t in T:
            r = self.split(H, mul(t, a), orbit)
            if r is None:
                continue
            if first is None:
                first = r
            else:
                extra.append(mul(r[1], inv(first[1])))
        if first is None:
            return None
        K, rep = first
        return coset_union(K, extra), rep


def _domain(action: Action | None, G: PermGroup) -> Action:
    return action if action is not None else NaturalAction(G.degree)


def stab_coset(task: StabTask) -> GroupCoset | None:
    """Run the coset recursion on one task, without any witness splitting."""
    G, a = task.coset.group, task.coset.rep
    action = _domain(task.action, G)
    window = np.arange(action.size, dtype=np.intp) if task.window is None \
        else np.unique(np.asarray(list(task.window), dtype=np.intp))
    eng = _Engine(action, task.delta)
    res = eng.split(G, tuple(a), window)
    if res is None:
        return None
    return GroupCoset(res[0], res[1])


def set_stabilizer(G: PermGroup, delta: Iterable[int], *, action: Action | None = None) -> PermGroup:
    """``G_Δ`` with witness ``R_Δ`` for the witness ``R`` of ``G``.

    ``G`` is first split into cosets of its witness; a group without a
    witness is accepted only when it is solvable (it is then its own witness).
    """
    G = ensure_witness(G)
    action = _domain(action, G)
    delta = frozenset(int(x) for x in delta)
    if not delta or len(delta) == action.size:
        return G
    R = witness_group(G)
    reps = [identity(G.degree)] if R.order == G.order else coset_transversal(G, R)
    eng = _Engine(action, delta)
    window = np.arange(action.size, dtype=np.intp)
    base = None
    extra: list[Perm] = []
    found = 0
    for r in reps:
        res = eng.split(R, r, window)
        if res is None:
            continue
        found += 1
        if base is None:
            base = res
        else:
            extra.append(mul(res[1], inv(base[1])))
    # the identity coset always contributes
    K, a = base
    S = coset_union(K, extra)
    log.debug("set stabilizer: %d nodes, fan-out %d, order %d", eng.stats.nodes, eng.stats.max_fanout, S.order)
    return S.with_witness(SolvableWitness(K.gens, found))


def wreath_square(G: PermGroup) -> PermGroup:
    """``G wr C2`` on ``2d`` points with witness ``R x R``."""
    d = G.degree
    shift = tuple(range(d, 2 * d))

    def left(g):
        return tuple(g) + shift

    def right(g):
        return tuple(range(d)) + tuple(d + x for x in g)

    swap = shift + tuple(range(d))
    gens = [left(g) for g in G.gens] + [right(g) for g in G.gens] + [swap]
    wit = None
    if G.witness is not None:
        wg = G.witness.gens
        wit = SolvableWitness(tuple(left(g) for g in wg) + tuple(right(g) for g in wg),
                              2 * G.witness.index_bound ** 2)
    return PermGroup(gens, 2 * d, witness=wit)


def set_transporter(G: PermGroup, delta: Iterable[int], lam: Iterable[int], *,
                    action: Action | None = None) -> GroupCoset | None:
    """``{g in G : Δ^g = Λ}`` from the stabilizer of ``Δ ∪ Λ'`` in ``G wr C2``."""
    G = ensure_witness(G)
    action = _domain(action, G)
    delta = frozenset(int(x) for x in delta)
    lam = frozenset(int(x) for x in lam)
    if len(delta) != len(lam):
        return None
    d, N = G.degree, action.size
    W = wreath_square(G)
    S = set_stabilizer(W, sorted(delta) + [N + x for x in sorted(lam)], action=WreathAction(action, d))
    swapping = [s for s in S.gens if s[0] >= d]
    if not swapping:
        return None
    hom = ActionHom(S, lambda s: (1, 0) if s[0] >= d else (0, 1), 2)
    K = PermGroup([tuple(x for x in k[:d]) for k in hom.kernel.gens], d)
    rep = tuple(x - d for x in swapping[0][:d])
    return GroupCoset(inherit_witness(K, G), rep)


def coset_transporter(C: GroupCoset, delta: Iterable[int], lam: Iterable[int], *,
                      action: Action | None = None) -> GroupCoset | None:
    """``{x in K r : Δ^x = Λ}`` as ``K_{Δ→Λ^{r^-1}} r``."""
    action = _domain(action, C.group)
    lam = np.asarray(sorted(int(x) for x in lam), dtype=np.intp)
    pulled = action.images(inv(C.rep), lam).tolist() if lam.size else []
    res = set_transporter(C.group, delta, pulled, action=action)
    if res is None:
        return None
    return GroupCoset(res.group, mul(res.rep, C.rep))
