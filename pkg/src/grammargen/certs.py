"""Canonical certificates for labeled graphs with per-node marks.

A certificate is a 64-bit digest: isomorphic graphs with identical marks
always hash equal; the converse holds only up to hash/refinement collisions,
so callers that must be exact (core replacement) run find_isomorphism on top.

Certificates are computed by iterated WL-style label refinement (one round
per node, a diameter bound), combined order-independently per connected
component so that e.g. a 6-cycle and two triangles separate.
"""
from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from . import backend
from ._hashutil import FNV_OFFSET, fnv1a_bytes, fnv1a_u64
from .graphs import LabeledGraph

Certificate = int  # 64-bit unsigned digest

_EMPTY_CERT = fnv1a_bytes(b"empty-graph")


def cert_hex(cert: Certificate) -> str:
    """Render a certificate as 16 lowercase hex characters."""
    return f"{cert:016x}"


def _node_seed(label: str, mark: str) -> int:
    h = fnv1a_bytes(b"N\x00")
    h = fnv1a_bytes(label.encode("utf-8"), h)
    h = fnv1a_bytes(b"\x00", h)
    h = fnv1a_bytes(mark.encode("utf-8"), h)
    return h


def _edge_seed(label: str) -> int:
    return fnv1a_bytes(label.encode("utf-8"), fnv1a_bytes(b"E\x00"))


def _csr(g: LabeledGraph, order: list):
    index = {v: i for i, v in enumerate(order)}
    indptr = np.zeros(len(order) + 1, dtype=np.int32)
    indices = []
    arc_hash = []
    for i, v in enumerate(order):
        for w in g.neighbors(v):
            indices.append(index[w])
            arc_hash.append(_edge_seed(g.edge_label(v, w)))
        indptr[i + 1] = len(indices)
    return (
        indptr,
        np.array(indices, dtype=np.int32),
        np.array(arc_hash, dtype=np.uint64),
    )


def certificate(
    g: LabeledGraph, marks: Optional[Mapping[int, str]] = None
) -> Certificate:
    """Isomorphism-invariant digest of g with optional per-node marks.

    Deterministic across runs and platforms; invariant under node-id
    renaming; sensitive to node labels, edge labels, marks, and structure.
    """
    if g.n == 0:
        return _EMPTY_CERT
    marks = marks or {}
    order = list(g.node_ids())
    init = np.array(
        [_node_seed(g.label(v), marks.get(v, "") or "") for v in order],
        dtype=np.uint64,
    )
    indptr, indices, arc_hash = _csr(g, order)
    final = backend.wl_hashes(init, indptr, indices, arc_hash, rounds=g.n)

    # combine per connected component so disjoint structure is visible
    index = {v: i for i, v in enumerate(order)}
    seen = set()
    comp_digests = []
    for start in order:
        if start in seen:
            continue
        stack = [start]
        comp = set()
        while stack:
            u = stack.pop()
            if u in comp:
                continue
            comp.add(u)
            stack.extend(w for w in g.neighbors(u) if w not in comp)
        seen |= comp
        comp_edges = sum(1 for a, b, _ in g.edges() if a in comp)
        acc = fnv1a_u64(FNV_OFFSET, len(comp))
        acc = fnv1a_u64(acc, comp_edges)
        for h in sorted(int(final[index[v]]) for v in comp):
            acc = fnv1a_u64(acc, h)
        comp_digests.append(acc)

    acc = fnv1a_u64(FNV_OFFSET, g.n)
    acc = fnv1a_u64(acc, g.m)
    acc = fnv1a_u64(acc, len(comp_digests))
    for d in sorted(comp_digests):
        acc = fnv1a_u64(acc, d)
    return acc


def combine_certs(*certs: Certificate) -> Certificate:
    """Order-sensitive combination of several certificates into one."""
    acc = fnv1a_u64(FNV_OFFSET, len(certs))
    for c in certs:
        acc = fnv1a_u64(acc, c)
    return acc


def find_isomorphism(
    g1: LabeledGraph,
    g2: LabeledGraph,
    marks1: Optional[Mapping[int, str]] = None,
    marks2: Optional[Mapping[int, str]] = None,
) -> Optional[dict]:
    """Exact isomorphism g1 -> g2 respecting labels, marks, and edge labels.

    Backtracking search with invariant pruning; returns a node mapping or
    None. Intended for small graphs (interfaces, collision audits).
    """
    marks1 = marks1 or {}
    marks2 = marks2 or {}
    if g1.n != g2.n or g1.m != g2.m:
        return None

    def key(g, marks, v):
        return (g.label(v), marks.get(v, "") or "", g.degree(v))

    by_key = {}
    for v in g2.node_ids():
        by_key.setdefault(key(g2, marks2, v), []).append(v)

    order = sorted(g1.node_ids(), key=lambda v: (len(by_key.get(key(g1, marks1, v), ())), v))
    mapping = {}
    used = set()

    def compatible(v, w):
        for u in g1.neighbors(v):
            if u in mapping:
                x = mapping[u]
                if not g2.has_edge(w, x):
                    return False
                if g2.edge_label(w, x) != g1.edge_label(v, u):
                    return False
        # mapped g2-neighbors of w must all be matched by mapped g1-neighbors
        mapped_nbrs = sum(1 for x in g2.neighbors(w) if x in used)
        own_mapped = sum(1 for u in g1.neighbors(v) if u in mapping)
        return mapped_nbrs == own_mapped

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in by_key.get(key(g1, marks1, v), ()):
            if w in used or not compatible(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return dict(mapping)
    return None
