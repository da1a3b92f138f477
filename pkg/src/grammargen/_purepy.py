"""Pure-Python fallback for the hot kernels.

The compiled twin in ``_speedups.pyx`` implements the exact same arithmetic;
backend parity is asserted by tests/test_backends.py. Keep the two in sync.

All graph arguments arrive in CSR form: ``indptr`` (n+1 int32), ``indices``
(arc targets, int32) and, for hashing, one 64-bit label hash per arc.
"""
from collections import deque

import numpy as np

from ._hashutil import FNV_OFFSET, FNV_PRIME, GOLDEN, MASK64, fnv1a_u64, mix64

NAME = "python"

# pair codes: A=0, C=1, G=2, U=3
_CAN_PAIR_WC = {(0, 3), (3, 0), (1, 2), (2, 1)}
_CAN_PAIR_WOBBLE = _CAN_PAIR_WC | {(2, 3), (3, 2)}


def fold_pairs(codes, minloop: int, wobble: bool):
    """Nussinov maximum-pairing DP with deterministic traceback.

    ``codes`` is a uint8 array over {0,1,2,3}. Returns an (k, 2) int32 array
    of pairs (i, j), i < j, sorted by i. Traceback prefers pairing over
    leaving i unpaired and, among pairing partners, the smallest k.
    """
    codes = [int(c) for c in codes]
    n = len(codes)
    allowed = _CAN_PAIR_WOBBLE if wobble else _CAN_PAIR_WC
    if n == 0:
        return np.zeros((0, 2), dtype=np.int32)
    m = [[0] * n for _ in range(n)]
    for span in range(minloop + 1, n):
        for i in range(0, n - span):
            j = i + span
            best = m[i + 1][j]
            for k in range(i + minloop + 1, j + 1):
                if (codes[i], codes[k]) in allowed:
                    inner = m[i + 1][k - 1] if k - 1 >= i + 1 else 0
                    rest = m[k + 1][j] if k + 1 <= j else 0
                    cand = inner + rest + 1
                    if cand > best:
                        best = cand
            m[i][j] = best
    pairs = []
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if i >= j or j - i <= minloop:
            continue
        target = m[i][j]
        if target == 0:
            continue
        paired = False
        for k in range(i + minloop + 1, j + 1):
            if (codes[i], codes[k]) in allowed:
                inner = m[i + 1][k - 1] if k - 1 >= i + 1 else 0
                rest = m[k + 1][j] if k + 1 <= j else 0
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


def bounded_distances(indptr, indices, cap: int):
    """All-pairs shortest-path lengths up to ``cap``; -1 where farther."""
    n = len(indptr) - 1
    out = np.full((n, n), -1, dtype=np.int32)
    for src in range(n):
        row = out[src]
        row[src] = 0
        if cap == 0:
            continue
        q = deque([src])
        while q:
            u = q.popleft()
            du = row[u]
            if du >= cap:
                continue
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if row[v] < 0:
                    row[v] = du + 1
                    q.append(v)
    return out


def wl_hashes(init, indptr, indices, arc_hash, rounds: int):
    """Weisfeiler-Lehman label refinement over 64-bit hashes.

    Per round every node folds the sorted multiset of its neighbour tokens
    (edge hash mixed with the neighbour's current hash) into its own hash.
    Returns the final uint64 hash per node.
    """
    n = len(indptr) - 1
    h = [int(x) for x in init]
    for _ in range(rounds):
        nxt = [0] * n
        for v in range(n):
            toks = sorted(
                mix64((int(arc_hash[e]) * GOLDEN + h[indices[e]]) & MASK64)
                for e in range(indptr[v], indptr[v + 1])
            )
            acc = fnv1a_u64(FNV_OFFSET, h[v])
            for t in toks:
                acc = fnv1a_u64(acc, t)
            nxt[v] = mix64(acc)
        h = nxt
    return np.array(h, dtype=np.uint64)
