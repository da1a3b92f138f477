"""NSPDK-style graph vectorization: hashed features over pairs of rooted
neighborhood subgraphs at bounded distance, plus the normalized set
similarity and diversity measures built on the resulting kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

import numpy as np

from . import backend
from ._hashutil import FNV_OFFSET, fnv1a_u64
from .certs import certificate
from .errors import ConfigError, GraphError
from .graphs import LabeledGraph, induced_subgraph

ROOT_MARK = "R"


@dataclass(frozen=True)
class KernelParams:
    max_radius: int = 3
    max_distance: int = 3
    feature_bits: int = 16

    def __post_init__(self):
        if self.max_radius < 0 or self.max_distance < 0:
            raise ConfigError("max_radius and max_distance must be >= 0")
        if not 8 <= self.feature_bits <= 30:
            raise ConfigError("feature_bits must lie in [8, 30]")


@dataclass(frozen=True)
class SparseVector:
    """Hashed feature vector; entries map feature index -> weight."""

    entries: Dict[int, float]

    def dot(self, other: "SparseVector") -> float:
        a, b = self.entries, other.entries
        if len(b) < len(a):
            a, b = b, a
        return sum(w * b[i] for i, w in a.items() if i in b)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.entries.values()))

    def normalized(self) -> "SparseVector":
        n = self.norm()
        if n == 0:
            return self
        return SparseVector({i: w / n for i, w in self.entries.items()})

    def to_svmlight(self) -> str:
        return " ".join(f"{i}:{w!r}" for i, w in sorted(self.entries.items()))


def _graph_csr(g: LabeledGraph, order):
    index = {v: i for i, v in enumerate(order)}
    indptr = np.zeros(len(order) + 1, dtype=np.int32)
    indices = []
    for i, v in enumerate(order):
        indices.extend(index[w] for w in g.neighbors(v))
        indptr[i + 1] = len(indices)
    return indptr, np.array(indices, dtype=np.int32)


def vectorize(g: LabeledGraph, p: KernelParams = KernelParams()) -> SparseVector:
    """Unit-norm hashed feature vector of g.

    One count per unordered root pair {u, v} at distance d <= max_distance
    and per radius r <= max_radius; the feature index hashes the two rooted
    neighborhood certificates together with (d, r).
    """
    if g.n == 0:
        raise GraphError("cannot vectorize an empty graph")
    order = list(g.node_ids())
    cap = max(p.max_radius, p.max_distance)
    indptr, indices = _graph_csr(g, order)
    dist = backend.bounded_distances(indptr, indices, cap)

    certs = {}
    for i, v in enumerate(order):
        row = dist[i]
        reachable = np.nonzero(row >= 0)[0]
        for r in range(p.max_radius + 1):
            ball = [order[j] for j in reachable if row[j] <= r]
            sub, to_base = induced_subgraph(g, ball)
            root_new = next(k for k, old in to_base.items() if old == v)
            certs[(i, r)] = certificate(sub, {root_new: ROOT_MARK})

    counts: Dict[int, int] = {}
    mask = (1 << p.feature_bits) - 1
    for i in range(len(order)):
        for j in range(i, len(order)):
            d = int(dist[i][j])
            if d < 0 or d > p.max_distance:
                continue
            for r in range(p.max_radius + 1):
                ca, cb = certs[(i, r)], certs[(j, r)]
                if ca > cb:
                    ca, cb = cb, ca
                h = fnv1a_u64(FNV_OFFSET, ca)
                h = fnv1a_u64(h, cb)
                h = fnv1a_u64(h, d)
                h = fnv1a_u64(h, r)
                idx = h & mask
                counts[idx] = counts.get(idx, 0) + 1
    return SparseVector({i: float(c) for i, c in counts.items()}).normalized()


def kernel(
    g1: LabeledGraph, g2: LabeledGraph, p: KernelParams = KernelParams()
) -> float:
    """Normalized similarity of two graphs; kernel(g, g) == 1."""
    return vectorize(g1, p).dot(vectorize(g2, p))


def _vectors(graphs: Sequence[LabeledGraph], p: KernelParams):
    return [vectorize(g, p) for g in graphs]


def gram_matrix(vectors: Sequence[SparseVector]) -> np.ndarray:
    n = len(vectors)
    out = np.zeros((n, n))
    for i in range(n):
        out[i, i] = vectors[i].dot(vectors[i])
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = vectors[i].dot(vectors[j])
    return out


def _cross_sum(va, vb) -> float:
    return float(sum(a.dot(b) for a in va for b in vb))


def set_similarity(
    gs: Sequence[LabeledGraph],
    rs: Sequence[LabeledGraph],
    p: KernelParams = KernelParams(),
) -> float:
    """Cross-kernel sum normalized by the geometric mean of self-similarity."""
    if not gs or not rs:
        raise GraphError("set_similarity requires non-empty sets")
    va, vb = _vectors(gs, p), _vectors(rs, p)
    k_gr = _cross_sum(va, vb)
    k_gg = _cross_sum(va, va)
    k_rr = _cross_sum(vb, vb)
    if k_gr == k_gg == k_rr:
        return 1.0 if k_gr else 0.0
    denom = math.sqrt(k_gg * k_rr)
    return k_gr / denom if denom else 0.0


def internal_diversity(
    gs: Sequence[LabeledGraph], p: KernelParams = KernelParams()
) -> tuple:
    """(IntDiv1, IntDiv2): 1 - mean kernel over all ordered pairs including
    self-pairs, and 1 - sqrt of the mean squared kernel."""
    if not gs:
        raise GraphError("internal_diversity requires a non-empty set")
    vs = _vectors(gs, p)
    n = len(vs)
    total = 0.0
    total_sq = 0.0
    for i in range(n):
        kii = vs[i].dot(vs[i])
        total += kii
        total_sq += kii * kii
        for j in range(i + 1, n):
            k = vs[i].dot(vs[j])
            total += 2 * k
            total_sq += 2 * k * k
    mean = total / (n * n)
    mean_sq = total_sq / (n * n)
    return 1.0 - mean, 1.0 - math.sqrt(mean_sq)
