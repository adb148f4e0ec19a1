"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np


def _find(parent: list[int], x: int) -> int:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _union(parent: list[int], size: list[int], a: int, b: int) -> bool:
    a = _find(parent, a)
    b = _find(parent, b)
    if a == b:
        return False
    if size[a] < size[b]:
        a, b = b, a
    parent[b] = a
    size[a] += size[b]
    return True


def _min_labels(parent: list[int], m: int) -> np.ndarray:
    first: dict[int, int] = {}
    out = np.empty(m, dtype=np.intp)
    for i in range(m):
        r = _find(parent, i)
        out[i] = first.setdefault(r, i)
    return out


def orbit_labels(images: np.ndarray) -> np.ndarray:
    images = np.asarray(images, dtype=np.intp)
    m = images.shape[1]
    parent = list(range(m))
    size = [1] * m
    for row in images.tolist():
        for i, x in enumerate(row):
            _union(parent, size, i, x)
    return _min_labels(parent, m)


def _block(rows: list[list[int]], m: int, alpha: int, omega: int, cap: int = -1):
    parent = list(range(m))
    size = [1] * m
    queue = []
    if _union(parent, size, alpha, omega):
        queue.append((alpha, omega))
    head = 0
    while head < len(queue):
        a, b = queue[head]
        head += 1
        for row in rows:
            if _union(parent, size, row[a], row[b]):
                queue.append((row[a], row[b]))
        if cap > 0 and size[_find(parent, alpha)] >= cap:
            return parent, m
    return parent, size[_find(parent, alpha)]


def minimal_block(images: np.ndarray, alpha: int, omega: int) -> np.ndarray:
    images = np.asarray(images, dtype=np.intp)
    m = images.shape[1]
    parent, _ = _block(images.tolist(), m, int(alpha), int(omega))
    return _min_labels(parent, m)


def block_sizes(images: np.ndarray, alpha: int, omegas: np.ndarray) -> np.ndarray:
    images = np.asarray(images, dtype=np.intp)
    m = images.shape[1]
    rows = images.tolist()
    return np.array(
        [_block(rows, m, int(alpha), int(w))[1] for w in np.asarray(omegas).tolist()],
        dtype=np.intp,
    )


def smallest_block(images: np.ndarray, alpha: int, omegas: np.ndarray) -> tuple[int, int]:
    # omegas must not contain alpha: the search stops early at size 2
    images = np.asarray(images, dtype=np.intp)
    m = images.shape[1]
    rows = images.tolist()
    best, best_w = m, -1
    for w in np.asarray(omegas).tolist():
        _, s = _block(rows, m, int(alpha), int(w), best)
        if s < best:
            best, best_w = s, int(w)
            if best == 2:
                break
    return best_w, best
