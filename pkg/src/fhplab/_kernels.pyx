# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled intersection kernels.

Same signatures as _kernels_py; masks arrive as Python ints and are packed
once into flat uint64 word arrays, after which all counting runs in C.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    int __builtin_ctzll(unsigned long long)


cdef Py_ssize_t _nwords(Py_ssize_t ground_size):
    return (ground_size + 63) >> 6


cdef unsigned long long* _pack(object masks, Py_ssize_t n, Py_ssize_t w) except NULL:
    cdef unsigned long long* buf = <unsigned long long*> malloc(n * w * 8)
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef bytes bb
    for i in range(n):
        bb = (<object> masks[i]).to_bytes(w * 8, "little")
        memcpy(&buf[i * w], <const char*> bb, w * 8)
    return buf


def count_intersecting_pairs(masks, ground_size):
    cdef Py_ssize_t n = len(masks)
    cdef Py_ssize_t w = _nwords(ground_size)
    cdef unsigned long long* buf = _pack(masks, n, w)
    cdef Py_ssize_t i, j, t
    cdef long long total = 0
    cdef unsigned long long* mi
    cdef unsigned long long* mj
    try:
        for i in range(n):
            mi = buf + i * w
            for j in range(i + 1, n):
                mj = buf + j * w
                for t in range(w):
                    if mi[t] & mj[t]:
                        total += 1
                        break
    finally:
        free(buf)
    return total


def count_intersecting_triples(masks, ground_size):
    cdef Py_ssize_t n = len(masks)
    cdef Py_ssize_t w = _nwords(ground_size)
    cdef unsigned long long* buf = _pack(masks, n, w)
    cdef unsigned long long* acc = <unsigned long long*> malloc(w * 8)
    cdef Py_ssize_t i, j, t, u
    cdef long long total = 0
    cdef bint nz
    cdef unsigned long long* mi
    cdef unsigned long long* mt
    if acc == NULL:
        free(buf)
        raise MemoryError()
    try:
        for i in range(n):
            mi = buf + i * w
            for j in range(i + 1, n):
                nz = False
                for t in range(w):
                    acc[t] = mi[t] & buf[j * w + t]
                    if acc[t]:
                        nz = True
                if not nz:
                    continue
                for u in range(j + 1, n):
                    mt = buf + u * w
                    for t in range(w):
                        if acc[t] & mt[t]:
                            total += 1
                            break
    finally:
        free(acc)
        free(buf)
    return total


cdef long long _rec_k(unsigned long long* buf, Py_ssize_t n, Py_ssize_t w,
                      int k, Py_ssize_t start, int depth,
                      unsigned long long* stack):
    cdef long long total = 0
    cdef Py_ssize_t i, t
    cdef int need = k - depth
    cdef bint nz
    cdef unsigned long long* cur = stack + depth * w
    cdef unsigned long long* nxt = stack + (depth + 1) * w
    for i in range(start, n - need + 1):
        nz = False
        for t in range(w):
            nxt[t] = cur[t] & buf[i * w + t]
            if nxt[t]:
                nz = True
        if nz:
            if need == 1:
                total += 1
            else:
                total += _rec_k(buf, n, w, k, i + 1, depth + 1, stack)
    return total


def count_intersecting_k(masks, ground_size, k):
    cdef Py_ssize_t n = len(masks)
    cdef Py_ssize_t w = _nwords(ground_size)
    cdef int kk = k
    if kk == 1:
        return sum(1 for m in masks if m)
    cdef unsigned long long* buf = _pack(masks, n, w)
    cdef unsigned long long* stack = <unsigned long long*> malloc((kk + 1) * w * 8)
    cdef Py_ssize_t t
    cdef long long total
    if stack == NULL:
        free(buf)
        raise MemoryError()
    for t in range(w):
        stack[t] = 0xFFFFFFFFFFFFFFFFULL
    try:
        total = _rec_k(buf, n, w, kk, 0, 0, stack)
    finally:
        free(stack)
        free(buf)
    return total


def depth_counts(masks, ground_size):
    cdef Py_ssize_t n = len(masks)
    cdef Py_ssize_t w = _nwords(ground_size)
    cdef unsigned long long* buf = _pack(masks, n, w)
    out = [0] * ground_size
    cdef Py_ssize_t i, t, idx
    cdef unsigned long long word
    try:
        for i in range(n):
            for t in range(w):
                word = buf[i * w + t]
                while word:
                    idx = (t << 6) + __builtin_ctzll(word)
                    out[idx] += 1
                    word &= word - 1
    finally:
        free(buf)
    return out
