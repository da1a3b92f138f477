"""Graph coarsening: contraction over cid groups and the two domain
annotators that assign cids (RNA structural elements, molecular rings).

A coarsener is a callable LabeledGraph -> CoarseningResult; the registry at
the bottom maps the CLI names "rna" / "mol" to the built-in ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .certs import cert_hex, certificate
from .errors import GraphError
from .graphs import LabeledGraph, induced_subgraph
from .rna import RnaStructure, graph_to_structure, structure_to_graph

# RNA structural element kinds used as coarse labels
STEM = "S"
HAIRPIN = "H"
MULTILOOP = "M"
INTERNAL = "I"
DANGLING = "D"


@dataclass(frozen=True)
class CoarseningResult:
    """A coarse graph plus the node mappings in both directions."""

    coarse: LabeledGraph
    base_to_coarse: dict
    coarse_to_base: dict  # coarse id -> frozenset of base ids


def join_sorted_labels(g: LabeledGraph, members) -> str:
    """Default group labeler: member labels sorted and concatenated."""
    return "".join(sorted(g.label(v) for v in members))


def contract(
    g: LabeledGraph, labeler: Callable = join_sorted_labels
) -> CoarseningResult:
    """Contract every cid group of g to a single coarse node.

    Coarse node ids are 0..k-1 ordered by the group's smallest base node id;
    a coarse edge joins two groups iff some base edge does. Requires every
    node to carry a cid.
    """
    groups: Dict[int, list] = {}
    for v in g.node_ids():
        cid = g.cid(v)
        if cid is None:
            raise GraphError(f"node {v} has no cid; cannot contract")
        groups.setdefault(cid, []).append(v)
    ordered = sorted(groups.values(), key=lambda members: min(members))
    base_to_coarse = {}
    for idx, members in enumerate(ordered):
        for v in members:
            base_to_coarse[v] = idx
    nodes = [(idx, labeler(g, members)) for idx, members in enumerate(ordered)]
    coarse_edges = {}
    for a, b, _ in g.edges():
        p, q = base_to_coarse[a], base_to_coarse[b]
        if p != q:
            coarse_edges[(min(p, q), max(p, q))] = ""
    edges = [(a, b, label) for (a, b), label in sorted(coarse_edges.items())]
    coarse = LabeledGraph(nodes, edges)
    coarse_to_base = {
        idx: frozenset(members) for idx, members in enumerate(ordered)
    }
    return CoarseningResult(coarse, base_to_coarse, coarse_to_base)


# -- RNA structural elements -------------------------------------------------


def rna_elements(s: RnaStructure) -> list:
    """Decompose a structure into (kind, positions) elements.

    Stems are maximal runs of stacked pairs; loops are classified by how
    many pairs close them (1: hairpin, 2: internal/bulge, >=3: multiloop);
    maximal unpaired runs of the exterior are dangling ends.
    """
    n = len(s.sequence)
    partner = s.partner_map()
    pairs = sorted(s.pairs)
    pair_set = set(pairs)

    elements = []
    # stems: maximal stacked runs
    in_stem = set()
    for i, j in pairs:
        if (i, j) in in_stem:
            continue
        run = [(i, j)]
        while (run[-1][0] + 1, run[-1][1] - 1) in pair_set:
            run.append((run[-1][0] + 1, run[-1][1] - 1))
        in_stem.update(run)
        positions = sorted(x for p in run for x in p)
        elements.append((STEM, positions))

    # loops: per closing pair, the unpaired positions directly accessible
    for i, j in pairs:
        if (i + 1, j - 1) in pair_set:
            continue  # stacked: interior belongs to the next pair's loop
        unpaired = []
        branches = 0
        k = i + 1
        while k < j:
            if k in partner and partner[k] > k:
                branches += 1
                k = partner[k] + 1
            elif k in partner:
                raise GraphError(f"inconsistent pairing at {k}")
            else:
                unpaired.append(k)
                k += 1
        if branches == 0:
            kind = HAIRPIN
        elif branches == 1:
            kind = INTERNAL
        else:
            kind = MULTILOOP
        if unpaired:
            elements.append((kind, unpaired))

    # exterior: maximal unpaired runs outside every pair
    exterior = []
    k = 0
    while k < n:
        if k in partner:
            k = partner[k] + 1
        else:
            run = [k]
            k += 1
            while k < n and k not in partner:
                run.append(k)
                k += 1
            exterior.append(run)
    for run in exterior:
        elements.append((DANGLING, run))

    elements.sort(key=lambda e: e[1][0])
    return elements


def annotate_rna(s: RnaStructure) -> LabeledGraph:
    """Nucleotide graph for s with cids marking structural elements."""
    g = structure_to_graph(s)
    cids = {}
    for cid, (_, positions) in enumerate(rna_elements(s)):
        for p in positions:
            cids[p] = cid
    return g.with_cids(cids)


def rna_coarsener(g: LabeledGraph) -> CoarseningResult:
    """Coarsen a nucleotide graph to its structural-element graph.

    Coarse labels are the element kinds S/H/M/I/D.
    """
    s, order = graph_to_structure(g)
    pos = {v: i for i, v in enumerate(order)}
    elements = rna_elements(s)
    kind_of = {}
    cids = {}
    for cid, (kind, positions) in enumerate(elements):
        for p in positions:
            cids[order[p]] = cid
            kind_of[order[p]] = kind
    annotated = g.with_cids(cids)
    return contract(annotated, labeler=lambda gg, members: kind_of[min(members)])


# -- molecular rings ----------------------------------------------------------


def _bridges(g: LabeledGraph) -> set:
    """Bridge edges via iterative Tarjan lowpoint computation."""
    disc = {}
    low = {}
    bridges = set()
    counter = [0]
    for root in g.node_ids():
        if root in disc:
            continue
        stack = [(root, None, iter(g.neighbors(root)))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for v in it:
                if v == parent:
                    continue
                if v not in disc:
                    disc[v] = low[v] = counter[0]
                    counter[0] += 1
                    stack.append((v, u, iter(g.neighbors(v))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[v])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if low[u] > disc[p]:
                        bridges.add((min(p, u), max(p, u)))
    return bridges


def annotate_molecule_rings(g: LabeledGraph) -> LabeledGraph:
    """Assign cids so each fused-ring block (2-edge-connected, >= 3 nodes)
    is one group and every non-ring node is its own group."""
    bridges = _bridges(g)
    # components of the bridge-free graph
    seen = set()
    blocks = []
    for start in g.node_ids():
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for v in g.neighbors(u):
                if v in seen or (min(u, v), max(u, v)) in bridges:
                    continue
                seen.add(v)
                comp.append(v)
                stack.append(v)
        blocks.append(sorted(comp))
    cids = {}
    next_cid = 0
    for block in sorted(blocks, key=min):
        if len(block) >= 3:
            for v in block:
                cids[v] = next_cid
            next_cid += 1
        else:
            for v in block:
                cids[v] = next_cid
                next_cid += 1
    return g.with_cids(cids)


def _ring_labeler(g: LabeledGraph, members) -> str:
    if len(members) == 1:
        return g.label(next(iter(members)))
    sub, _ = induced_subgraph(g, members)
    return cert_hex(certificate(sub))


def molecule_coarsener(g: LabeledGraph) -> CoarseningResult:
    """Contract fused-ring blocks to single nodes labeled by the ring hash."""
    annotated = annotate_molecule_rings(g)
    return contract(annotated, labeler=_ring_labeler)


COARSENERS: Dict[str, Optional[Callable]] = {
    "rna": rna_coarsener,
    "mol": molecule_coarsener,
    "none": None,
}


def get_coarsener(name: Optional[str]):
    key = name or "none"
    if key not in COARSENERS:
        raise GraphError(f"unknown coarsener {name!r}; choose from {sorted(COARSENERS)}")
    return COARSENERS[key]
