# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics match ``_pykernels`` exactly."""

import numpy as np
from libc.stdlib cimport malloc, calloc, free


def latin_violation(values, Py_ssize_t order, Py_ssize_t arity):
    cdef const unsigned char[::1] v = np.ascontiguousarray(values, dtype=np.uint8)
    cdef Py_ssize_t total, p, stride, base, k, cell, hi, lo
    cdef unsigned char sym
    cdef char *seen
    if arity == 0:
        return None
    total = order ** arity
    seen = <char *> malloc(order)
    try:
        for p in range(arity):
            stride = order ** (arity - 1 - p)
            # base cells have coordinate p equal to zero, visited in flat order
            for hi in range(0, total, stride * order):
                for lo in range(stride):
                    base = hi + lo
                    for k in range(order):
                        seen[k] = 0
                    for k in range(order):
                        cell = base + k * stride
                        sym = v[cell]
                        if seen[sym]:
                            return int(p), int(cell), int(sym)
                        seen[sym] = 1
        return None
    finally:
        free(seen)


cdef struct State:
    int n
    int s
    int n_words
    int *rows        # n_words * n
    int *solve       # n * s^(n-1)
    int *weights     # n * n
    int *occ_start   # n * s + 1 offsets into occ
    int *occ         # n * n_words word ids
    int *img         # n * s
    char *used       # n * s
    int *trail       # pairs (i, a)
    int trail_len
    int *queue       # pairs (i, a)
    int queue_len


cdef bint _assign(State *st, int i, int a, int b):
    cdef int cur = st.img[i * st.s + a]
    if cur >= 0:
        return cur == b
    if st.used[i * st.s + b]:
        return False
    st.img[i * st.s + a] = b
    st.used[i * st.s + b] = 1
    st.trail[2 * st.trail_len] = i
    st.trail[2 * st.trail_len + 1] = a
    st.trail_len += 1
    st.queue[2 * st.queue_len] = i
    st.queue[2 * st.queue_len + 1] = a
    st.queue_len += 1
    return True


cdef bint _propagate(State *st):
    cdef int i, a, k, w, t, j, missing, n_missing, code, forced
    cdef int n = st.n
    cdef int s = st.s
    cdef int *row
    cdef int *wj
    cdef int sol_size = 1
    for t in range(n - 1):
        sol_size *= s
    while st.queue_len > 0:
        st.queue_len -= 1
        i = st.queue[2 * st.queue_len]
        a = st.queue[2 * st.queue_len + 1]
        for k in range(st.occ_start[i * s + a], st.occ_start[i * s + a + 1]):
            w = st.occ[k]
            row = st.rows + w * n
            missing = -1
            n_missing = 0
            for t in range(n):
                if st.img[t * s + row[t]] < 0:
                    missing = t
                    n_missing += 1
                    if n_missing > 1:
                        break
            if n_missing > 1:
                continue
            j = n - 1 if n_missing == 0 else missing
            wj = st.weights + j * n
            code = 0
            for t in range(n):
                if t != j:
                    code += wj[t] * st.img[t * s + row[t]]
            forced = st.solve[j * sol_size + code]
            if n_missing == 0:
                if st.img[j * s + row[j]] != forced:
                    return False
            elif not _assign(st, j, row[j], forced):
                return False
    return True


cdef void _undo(State *st, int mark):
    cdef int i, a
    while st.trail_len > mark:
        st.trail_len -= 1
        i = st.trail[2 * st.trail_len]
        a = st.trail[2 * st.trail_len + 1]
        st.used[i * st.s + st.img[i * st.s + a]] = 0
        st.img[i * st.s + a] = -1


cdef bint _search(State *st):
    cdef int i = 0, a = 0, b, mark
    cdef bint found = False
    for i in range(st.n):
        for a in range(st.s):
            if st.img[i * st.s + a] < 0:
                found = True
                break
        if found:
            break
    if not found:
        return True
    for b in range(st.s):
        if st.used[i * st.s + b]:
            continue
        mark = st.trail_len
        st.queue_len = 0
        if _assign(st, i, a, b) and _propagate(st) and _search(st):
            return True
        _undo(st, mark)
    return False


def isotopy_search(words, solvers, int order):
    cdef int[:, ::1] wv = np.ascontiguousarray(words, dtype=np.intc)
    cdef int[:, ::1] sv = np.ascontiguousarray(solvers, dtype=np.intc)
    cdef State st
    cdef int n = wv.shape[1]
    cdef int s = order
    cdef int n_words = wv.shape[0]
    cdef int w, t, j, r, pos
    cdef int *fill
    if n_words == 0:
        return None
    st.n = n
    st.s = s
    st.n_words = n_words
    st.rows = &wv[0, 0]
    st.solve = &sv[0, 0]
    st.weights = <int *> calloc(n * n, sizeof(int))
    st.occ_start = <int *> calloc(n * s + 1, sizeof(int))
    st.occ = <int *> malloc(n * n_words * sizeof(int))
    st.img = <int *> malloc(n * s * sizeof(int))
    st.used = <char *> calloc(n * s, sizeof(char))
    st.trail = <int *> malloc(2 * n * s * sizeof(int))
    st.queue = <int *> malloc(2 * n * s * sizeof(int))
    fill = <int *> calloc(n * s, sizeof(int))
    try:
        for j in range(n):
            for t in range(n):
                if t == j:
                    continue
                r = t if t < j else t - 1
                st.weights[j * n + t] = s ** (n - 2 - r)
        for w in range(n_words):
            for t in range(n):
                st.occ_start[t * s + wv[w, t] + 1] += 1
        for t in range(n * s):
            st.occ_start[t + 1] += st.occ_start[t]
        for w in range(n_words):
            for t in range(n):
                pos = t * s + wv[w, t]
                st.occ[st.occ_start[pos] + fill[pos]] = w
                fill[pos] += 1
        for t in range(n * s):
            st.img[t] = -1
        st.trail_len = 0
        st.queue_len = 0
        if not _search(&st):
            return None
        out = np.empty((n, s), dtype=np.int64)
        for t in range(n):
            for r in range(s):
                out[t, r] = st.img[t * s + r]
        return out
    finally:
        free(st.weights)
        free(st.occ_start)
        free(st.occ)
        free(st.img)
        free(st.used)
        free(st.trail)
        free(st.queue)
        free(fill)
