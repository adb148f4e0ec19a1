# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled union-find kernels for orbit and block computations.

``images`` is always a C-contiguous ``(k, m)`` array of point images of the
``k`` generators acting on points ``0..m-1``.
"""

import numpy as np
cimport numpy as cnp

ctypedef cnp.intp_t idx_t


cdef inline idx_t _find(idx_t[::1] parent, idx_t x) noexcept nogil:
    cdef idx_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


cdef inline bint _union(idx_t[::1] parent, idx_t[::1] size, idx_t a, idx_t b) noexcept nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a == b:
        return False
    if size[a] < size[b]:
        a, b = b, a
    parent[b] = a
    size[a] += size[b]
    return True


cdef void _min_labels(idx_t[::1] parent, idx_t[::1] out, idx_t m) noexcept nogil:
    cdef idx_t i, r
    for i in range(m):
        out[i] = -1
    # first point of each class in increasing order is the minimum
    for i in range(m):
        r = _find(parent, i)
        if out[r] == -1:
            out[r] = i
    for i in range(m):
        r = _find(parent, i)
        if r != i:
            out[i] = out[r]


def orbit_labels(cnp.ndarray images):
    cdef idx_t[:, ::1] img = np.ascontiguousarray(images, dtype=np.intp)
    cdef idx_t k = img.shape[0], m = img.shape[1]
    cdef cnp.ndarray parent_arr = np.arange(m, dtype=np.intp)
    cdef cnp.ndarray size_arr = np.ones(m, dtype=np.intp)
    cdef cnp.ndarray out_arr = np.empty(m, dtype=np.intp)
    cdef idx_t[::1] parent = parent_arr, size = size_arr, out = out_arr
    cdef idx_t g, i
    with nogil:
        for g in range(k):
            for i in range(m):
                _union(parent, size, i, img[g, i])
        _min_labels(parent, out, m)
    return out_arr


cdef idx_t _block(idx_t[:, ::1] img, idx_t alpha, idx_t omega,
                  idx_t[::1] parent, idx_t[::1] size,
                  idx_t[::1] qa, idx_t[::1] qb, idx_t cap=-1) noexcept nogil:
    # Atkinson's closure of the relation alpha ~ omega; returns class size of alpha,
    # or m as soon as that class reaches cap (when cap > 0)
    cdef idx_t k = img.shape[0], m = img.shape[1]
    cdef idx_t i, g, head = 0, tail = 0, a, b
    for i in range(m):
        parent[i] = i
        size[i] = 1
    if _union(parent, size, alpha, omega):
        qa[tail] = alpha
        qb[tail] = omega
        tail += 1
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        for g in range(k):
            if _union(parent, size, img[g, a], img[g, b]):
                qa[tail] = img[g, a]
                qb[tail] = img[g, b]
                tail += 1
        if cap > 0 and size[_find(parent, alpha)] >= cap:
            return m
    return size[_find(parent, alpha)]


def minimal_block(cnp.ndarray images, idx_t alpha, idx_t omega):
    cdef idx_t[:, ::1] img = np.ascontiguousarray(images, dtype=np.intp)
    cdef idx_t m = img.shape[1]
    cdef cnp.ndarray parent_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray size_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray qa_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray qb_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray out_arr = np.empty(m, dtype=np.intp)
    cdef idx_t[::1] parent = parent_arr, size = size_arr, qa = qa_arr, qb = qb_arr
    cdef idx_t[::1] out = out_arr
    with nogil:
        _block(img, alpha, omega, parent, size, qa, qb)
        _min_labels(parent, out, m)
    return out_arr


def block_sizes(cnp.ndarray images, idx_t alpha, cnp.ndarray omegas):
    cdef idx_t[:, ::1] img = np.ascontiguousarray(images, dtype=np.intp)
    cdef idx_t[::1] om = np.ascontiguousarray(omegas, dtype=np.intp)
    cdef idx_t m = img.shape[1], c = om.shape[0], j
    cdef cnp.ndarray parent_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray size_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray qa_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray qb_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray out_arr = np.empty(c, dtype=np.intp)
    cdef idx_t[::1] parent = parent_arr, size = size_arr, qa = qa_arr, qb = qb_arr
    cdef idx_t[::1] out = out_arr
    with nogil:
        for j in range(c):
            out[j] = _block(img, alpha, om[j], parent, size, qa, qb)
    return out_arr


def smallest_block(cnp.ndarray images, idx_t alpha, cnp.ndarray omegas):
    """First omega whose block with alpha is smallest and proper; (-1, m) if none.

    ``omegas`` must not contain ``alpha``: the search stops at the first size-2 block.
    """
    cdef idx_t[:, ::1] img = np.ascontiguousarray(images, dtype=np.intp)
    cdef idx_t[::1] om = np.ascontiguousarray(omegas, dtype=np.intp)
    cdef idx_t m = img.shape[1], c = om.shape[0], j, s
    cdef idx_t best = m, best_w = -1
    cdef cnp.ndarray parent_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray size_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray qa_arr = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray qb_arr = np.empty(m, dtype=np.intp)
    cdef idx_t[::1] parent = parent_arr, size = size_arr, qa = qa_arr, qb = qb_arr
    with nogil:
        for j in range(c):
            s = _block(img, alpha, om[j], parent, size, qa, qb, best)
            if s < best:
                best = s
                best_w = om[j]
                if best == 2:
                    break
    return best_w, best
