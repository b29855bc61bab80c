# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled signature refinement.  Same contract and numbering as _refine_py."""
from libc.stdlib cimport malloc, free, qsort

ctypedef long long i64

cdef i64* g_block
cdef i64* g_sig
cdef i64* g_off
cdef i64* g_len


cdef int _cmp_i64(const void* a, const void* b) noexcept nogil:
    cdef i64 x = (<i64*>a)[0]
    cdef i64 y = (<i64*>b)[0]
    return (x > y) - (x < y)


cdef int _cmp_state(const void* a, const void* b) noexcept nogil:
    cdef i64 s = (<i64*>a)[0]
    cdef i64 t = (<i64*>b)[0]
    cdef i64 i, ls, lt, m
    if g_block[s] != g_block[t]:
        return -1 if g_block[s] < g_block[t] else 1
    ls = g_len[s]
    lt = g_len[t]
    m = ls if ls < lt else lt
    for i in range(m):
        if g_sig[g_off[s] + i] != g_sig[g_off[t] + i]:
            return -1 if g_sig[g_off[s] + i] < g_sig[g_off[t] + i] else 1
    return (ls > lt) - (ls < lt)


cdef i64 _assign(i64 n, i64* order, i64* newblock) noexcept nogil:
    """Number states by the sorted order of (block, signature); return count."""
    cdef i64 i, k = 0
    for i in range(n):
        order[i] = i
    qsort(order, n, sizeof(i64), _cmp_state)
    for i in range(n):
        if i > 0 and _cmp_state(&order[i - 1], &order[i]) != 0:
            k += 1
        newblock[order[i]] = k
    return k + 1 if n > 0 else 0


def refine(n, src, lab, dst, init):
    cdef i64 N = n
    cdef i64 E = len(src)
    cdef i64 i, e, s, j, w, nb, count, new_count
    cdef i64* off = <i64*>malloc((N + 1) * sizeof(i64))
    cdef i64* tgt = <i64*>malloc((E + 1) * sizeof(i64))
    cdef i64* lbl = <i64*>malloc((E + 1) * sizeof(i64))
    cdef i64* sig = <i64*>malloc((E + 1) * sizeof(i64))
    cdef i64* ln = <i64*>malloc((N + 1) * sizeof(i64))
    cdef i64* block = <i64*>malloc((N + 1) * sizeof(i64))
    cdef i64* newblock = <i64*>malloc((N + 1) * sizeof(i64))
    cdef i64* order = <i64*>malloc((N + 1) * sizeof(i64))
    cdef i64* fill = <i64*>malloc((N + 1) * sizeof(i64))
    global g_block, g_sig, g_off, g_len
    try:
        for i in range(N + 1):
            off[i] = 0
        for e in range(E):
            off[<i64>src[e] + 1] += 1
        for i in range(N):
            off[i + 1] += off[i]
        for i in range(N):
            fill[i] = off[i]
        for e in range(E):
            s = src[e]
            tgt[fill[s]] = dst[e]
            lbl[fill[s]] = lab[e]
            fill[s] += 1

        # initial blocks, canonically renumbered
        for i in range(N):
            block[i] = init[i]
            ln[i] = 0
        g_block = block
        g_sig = sig
        g_off = off
        g_len = ln
        count = _assign(N, order, newblock)
        for i in range(N):
            block[i] = newblock[i]

        while True:
            nb = count
            for s in range(N):
                for e in range(off[s], off[s + 1]):
                    sig[e] = lbl[e] * nb + block[tgt[e]]
                w = off[s + 1] - off[s]
                if w > 1:
                    qsort(&sig[off[s]], w, sizeof(i64), _cmp_i64)
                # dedupe in place
                j = 0
                for e in range(off[s], off[s + 1]):
                    if j == 0 or sig[off[s] + j - 1] != sig[e]:
                        sig[off[s] + j] = sig[e]
                        j += 1
                ln[s] = j
            new_count = _assign(N, order, newblock)
            for i in range(N):
                block[i] = newblock[i]
            if new_count == count:
                break
            count = new_count
        return [block[i] for i in range(N)]
    finally:
        free(off); free(tgt); free(lbl); free(sig); free(ln)
        free(block); free(newblock); free(order); free(fill)
