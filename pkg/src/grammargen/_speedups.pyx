# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Nussinov DP, bounded BFS, WL hash refinement.

Mirror of grammargen._purepy; both must produce bit-identical results.
"""
from libc.stdlib cimport free, malloc

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "compiled"

cdef extern from *:
    """
    static const unsigned long long GG_MASK64 = 0xFFFFFFFFFFFFFFFFULL;
    """
    pass

cdef unsigned long long FNV_OFFSET = 0xCBF29CE484222325ULL
cdef unsigned long long FNV_PRIME = 0x100000001B3ULL
cdef unsigned long long GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline unsigned long long _fnv1a_u64(unsigned long long h, unsigned long long x) nogil:
    cdef int k
    for k in range(8):
        h = (h ^ (x & 0xFFULL)) * FNV_PRIME
        x >>= 8
    return h


cdef inline unsigned long long _mix64(unsigned long long x) nogil:
    x ^= x >> 30
    x *= 0xBF58476D1CE4E5B9ULL
    x ^= x >> 27
    x *= 0x94D049BB133111EBULL
    x ^= x >> 31
    return x


cdef inline bint _can_pair(int a, int b, bint wobble) nogil:
    # A=0, C=1, G=2, U=3
    if (a == 0 and b == 3) or (a == 3 and b == 0):
        return True
    if (a == 1 and b == 2) or (a == 2 and b == 1):
        return True
    if wobble and ((a == 2 and b == 3) or (a == 3 and b == 2)):
        return True
    return False


def fold_pairs(cnp.uint8_t[::1] codes, int minloop, bint wobble):
    """Nussinov maximum-pairing DP with deterministic traceback."""
    cdef int n = codes.shape[0]
    if n == 0:
        return np.zeros((0, 2), dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] m = np.zeros((n, n), dtype=np.int32)
    cdef cnp.int32_t[:, ::1] mv = m
    cdef int span, i, j, k, best, inner, rest, cand
    with nogil:
        for span in range(minloop + 1, n):
            for i in range(0, n - span):
                j = i + span
                best = mv[i + 1, j]
                for k in range(i + minloop + 1, j + 1):
                    if _can_pair(codes[i], codes[k], wobble):
                        inner = mv[i + 1, k - 1] if k - 1 >= i + 1 else 0
                        rest = mv[k + 1, j] if k + 1 <= j else 0
                        cand = inner + rest + 1
                        if cand > best:
                            best = cand
                mv[i, j] = best
    pairs = []
    cdef list stack = [(0, n - 1)]
    cdef int target
    cdef bint paired
    while stack:
        i, j = stack.pop()
        if i >= j or j - i <= minloop:
            continue
        target = mv[i, j]
        if target == 0:
            continue
        paired = False
        for k in range(i + minloop + 1, j + 1):
            if _can_pair(codes[i], codes[k], wobble):
                inner = mv[i + 1, k - 1] if k - 1 >= i + 1 else 0
                rest = mv[k + 1, j] if k + 1 <= j else 0
                if inner + rest + 1 == target:
                    pairs.append((i, k))
                    stack.append((i + 1, k - 1))
                    stack.append((k + 1, j))
                    paired = True
                    break
        if not paired:
            stack.append((i + 1, j))
    pairs.sort()
    return np.array(pairs, dtype=np.int32) if pairs else np.zeros((0, 2), dtype=np.int32)


def bounded_distances(cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices, int cap):
    """All-pairs shortest-path lengths up to ``cap``; -1 where farther."""
    cdef int n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.int32_t, ndim=2] out = np.full((n, n), -1, dtype=np.int32)
    cdef cnp.int32_t[:, ::1] ov = out
    cdef int *queue = <int *> malloc(n * sizeof(int))
    if queue == NULL:
        raise MemoryError()
    cdef int src, head, tail, u, v, e, du
    try:
        with nogil:
            for src in range(n):
                ov[src, src] = 0
                if cap == 0:
                    continue
                head = 0
                tail = 0
                queue[tail] = src
                tail += 1
                while head < tail:
                    u = queue[head]
                    head += 1
                    du = ov[src, u]
                    if du >= cap:
                        continue
                    for e in range(indptr[u], indptr[u + 1]):
                        v = indices[e]
                        if ov[src, v] < 0:
                            ov[src, v] = du + 1
                            queue[tail] = v
                            tail += 1
    finally:
        free(queue)
    return out


cdef void _wl_round(cnp.uint64_t[::1] src, cnp.uint64_t[::1] dst,
                    cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices,
                    cnp.uint64_t[::1] arc_hash, unsigned long long *toks) nogil:
    cdef int n = indptr.shape[0] - 1
    cdef int v, e, d, a, b
    cdef unsigned long long acc, t
    for v in range(n):
        d = 0
        for e in range(indptr[v], indptr[v + 1]):
            toks[d] = _mix64(arc_hash[e] * GOLDEN + src[indices[e]])
            d += 1
        # insertion sort; node degrees are small in this domain
        for a in range(1, d):
            t = toks[a]
            b = a - 1
            while b >= 0 and toks[b] > t:
                toks[b + 1] = toks[b]
                b -= 1
            toks[b + 1] = t
        acc = _fnv1a_u64(FNV_OFFSET, src[v])
        for a in range(d):
            acc = _fnv1a_u64(acc, toks[a])
        dst[v] = _mix64(acc)


def wl_hashes(cnp.uint64_t[::1] init, cnp.int32_t[::1] indptr,
              cnp.int32_t[::1] indices, cnp.uint64_t[::1] arc_hash, int rounds):
    """Weisfeiler-Lehman label refinement over 64-bit hashes."""
    cdef int n = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] buf_a = np.array(init, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] buf_b = np.zeros(n, dtype=np.uint64)
    cdef cnp.uint64_t[::1] av = buf_a
    cdef cnp.uint64_t[::1] bv = buf_b
    cdef int maxdeg = 0, d, v, r
    for v in range(n):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    cdef unsigned long long *toks = <unsigned long long *> malloc(
        (maxdeg if maxdeg > 0 else 1) * sizeof(unsigned long long))
    if toks == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(rounds):
                if r % 2 == 0:
                    _wl_round(av, bv, indptr, indices, arc_hash, toks)
                else:
                    _wl_round(bv, av, indptr, indices, arc_hash, toks)
    finally:
        free(toks)
    return buf_b if rounds % 2 == 1 else buf_a
