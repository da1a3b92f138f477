"""Labeled undirected simple graphs and the basic operations on them.

Graphs are immutable after construction: every mutation-shaped operation
returns a new graph (with node ids compacted to 0..n-1) plus a mapping back
to the input ids, so results serialize deterministically.
"""
from __future__ import annotations

import json
from collections import deque
from typing import Iterable, Mapping, NamedTuple

from .errors import GraphError


class LabeledGraph:
    """Undirected labeled graph; no self-loops, no parallel edges.

    Nodes are (id, label, optional cid) with unique integer ids; edges are
    (a, b, label) over existing node ids.
    """

    __slots__ = ("_labels", "_cids", "_adj", "_m")

    def __init__(self, nodes: Iterable, edges: Iterable):
        labels = {}
        cids = {}
        for item in nodes:
            if len(item) == 2:
                nid, label = item
                cid = None
            else:
                nid, label, cid = item
            nid = int(nid)
            if nid in labels:
                raise GraphError(f"duplicate node id {nid}")
            if cid is not None:
                cid = int(cid)
                if cid < 0:
                    raise GraphError(f"cid must be a natural number, got {cid}")
            labels[nid] = str(label)
            cids[nid] = cid
        adj = {nid: {} for nid in labels}
        m = 0
        for a, b, label in edges:
            a, b = int(a), int(b)
            if a not in labels or b not in labels:
                raise GraphError(f"edge ({a},{b}) references unknown node")
            if a == b:
                raise GraphError(f"self-loop on node {a}")
            if b in adj[a]:
                raise GraphError(f"parallel edge ({a},{b})")
            adj[a][b] = str(label)
            adj[b][a] = str(label)
            m += 1
        self._labels = labels
        self._cids = cids
        self._adj = adj
        self._m = m

    # -- accessors ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def m(self) -> int:
        return self._m

    def node_ids(self) -> tuple:
        return tuple(sorted(self._labels))

    def has_node(self, v: int) -> bool:
        return v in self._labels

    def label(self, v: int) -> str:
        try:
            return self._labels[v]
        except KeyError:
            raise GraphError(f"unknown node {v}") from None

    def cid(self, v: int):
        try:
            return self._cids[v]
        except KeyError:
            raise GraphError(f"unknown node {v}") from None

    def neighbors(self, v: int) -> tuple:
        try:
            return tuple(sorted(self._adj[v]))
        except KeyError:
            raise GraphError(f"unknown node {v}") from None

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj.get(a, ())

    def edge_label(self, a: int, b: int) -> str:
        try:
            return self._adj[a][b]
        except KeyError:
            raise GraphError(f"no edge ({a},{b})") from None

    def edges(self) -> list:
        """Edges as (a, b, label) with a < b, sorted."""
        out = []
        for a in sorted(self._adj):
            for b, label in self._adj[a].items():
                if a < b:
                    out.append((a, b, label))
        out.sort()
        return out

    def nodes(self) -> list:
        """Nodes as (id, label, cid), sorted by id."""
        return [(v, self._labels[v], self._cids[v]) for v in sorted(self._labels)]

    def with_cids(self, cids: Mapping[int, int]) -> "LabeledGraph":
        """Copy of this graph with cids replaced by the given mapping."""
        return LabeledGraph(
            [(v, self._labels[v], cids.get(v)) for v in sorted(self._labels)],
            self.edges(),
        )

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return (
            self._labels == other._labels
            and self._cids == other._cids
            and self._adj == other._adj
        )

    def __hash__(self):
        return hash((tuple(self.nodes()), tuple(self.edges())))

    def __repr__(self):
        return f"LabeledGraph(n={self.n}, m={self.m})"


class Subgraph(NamedTuple):
    graph: LabeledGraph
    to_base: dict  # compacted id -> original id


def neighborhood(g: LabeledGraph, root: int, radius: int) -> set:
    """Nodes at shortest-path distance <= radius from root."""
    if not g.has_node(root):
        raise GraphError(f"unknown root {root}")
    if radius < 0:
        raise GraphError("radius must be >= 0")
    seen = {root: 0}
    q = deque([root])
    while q:
        u = q.popleft()
        d = seen[u]
        if d >= radius:
            continue
        for v in g.neighbors(u):
            if v not in seen:
                seen[v] = d + 1
                q.append(v)
    return set(seen)


def distances_from(g: LabeledGraph, roots: Iterable[int], cap=None) -> dict:
    """BFS distances from a set of roots (multi-source), bounded by cap."""
    seen = {}
    q = deque()
    for r in roots:
        if not g.has_node(r):
            raise GraphError(f"unknown root {r}")
        seen[r] = 0
        q.append(r)
    while q:
        u = q.popleft()
        d = seen[u]
        if cap is not None and d >= cap:
            continue
        for v in g.neighbors(u):
            if v not in seen:
                seen[v] = d + 1
                q.append(v)
    return seen


def induced_subgraph(g: LabeledGraph, keep: Iterable[int]) -> Subgraph:
    """Induced subgraph on ``keep``, ids compacted to 0..k-1 by sorted order."""
    keep = sorted(set(keep))
    for v in keep:
        if not g.has_node(v):
            raise GraphError(f"unknown node {v}")
    to_new = {old: i for i, old in enumerate(keep)}
    nodes = [(to_new[v], g.label(v), g.cid(v)) for v in keep]
    edges = []
    for a, b, label in g.edges():
        if a in to_new and b in to_new:
            edges.append((to_new[a], to_new[b], label))
    return Subgraph(LabeledGraph(nodes, edges), {i: old for old, i in to_new.items()})


def is_connected(g: LabeledGraph) -> bool:
    """True iff g has at most one connected component (empty graph: True)."""
    ids = g.node_ids()
    if not ids:
        return True
    return len(distances_from(g, [ids[0]])) == g.n


def connected_components(g: LabeledGraph) -> list:
    """Connected components as sorted node-id lists, ordered by minimum id."""
    remaining = set(g.node_ids())
    comps = []
    while remaining:
        start = min(remaining)
        comp = set(distances_from(g, [start]))
        comps.append(sorted(comp))
        remaining -= comp
    return comps


# -- JSON interchange -------------------------------------------------------


def graph_to_dict(g: LabeledGraph) -> dict:
    nodes = []
    for v, label, cid in g.nodes():
        node = {"id": v, "label": label}
        if cid is not None:
            node["cid"] = cid
        nodes.append(node)
    return {
        "nodes": nodes,
        "edges": [{"a": a, "b": b, "label": label} for a, b, label in g.edges()],
    }


def graph_from_dict(d: Mapping) -> LabeledGraph:
    try:
        nodes = [(n["id"], n["label"], n.get("cid")) for n in d["nodes"]]
        edges = [(e["a"], e["b"], e["label"]) for e in d["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph object: {exc}") from None
    return LabeledGraph(nodes, edges)


def graph_to_json(g: LabeledGraph) -> str:
    """Canonical single-line JSON; bit-exact round-trip with graph_from_json."""
    return json.dumps(graph_to_dict(g), separators=(",", ":"), sort_keys=True)


def graph_from_json(s: str) -> LabeledGraph:
    return graph_from_dict(json.loads(s))
