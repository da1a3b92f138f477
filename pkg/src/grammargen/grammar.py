"""Core-interface-pair grammar: extraction, induction, and substitution.

A CIP is a connected core subgraph plus the surrounding interface context;
cores whose interfaces hash equal are interchangeable. In coarsened mode the
core is the preimage of a coarse-graph neighborhood and a swap additionally
requires the coarse-level interface to match (both certificates are combined
into the lookup key).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .certs import Certificate, cert_hex, certificate, combine_certs, find_isomorphism
from .coarsen import CoarseningResult
from .errors import CertificateCollisionError, ConfigError, GrammarError, GraphError
from .graphs import (
    LabeledGraph,
    distances_from,
    induced_subgraph,
    neighborhood,
)

CORE_MARK = "C"
_GRAMMAR_FORMAT = "grammargen-grammar"
_GRAMMAR_VERSION = 1


@dataclass(frozen=True)
class CipParams:
    """Extraction geometry: core radius and interface thicknesses."""

    radius: int
    thickness: int = 1
    base_thickness: int = 1
    coarsened: bool = False

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigError("radius must be >= 0")
        if self.thickness < 1:
            raise ConfigError("thickness must be >= 1")
        if self.coarsened and self.base_thickness < 1:
            raise ConfigError("base_thickness must be >= 1 in coarsened mode")

    def key(self) -> tuple:
        return (self.radius, self.thickness, self.base_thickness, self.coarsened)


def interface_mark(distance: int) -> str:
    return f"I{distance}"


@dataclass(frozen=True)
class CIP:
    """A core-interface fragment extracted at some root.

    ``fragment`` holds core plus base-interface nodes (compacted ids);
    ``marks`` labels core nodes "C" and interface nodes with their distance
    mark. Host-site fields are populated only for in-place extractions and
    never serialized.
    """

    fragment: LabeledGraph
    marks: dict
    root: int
    core_nodes: frozenset
    interface_nodes: frozenset
    interface_cert: Certificate
    core_cert: Certificate
    params: CipParams
    count: int = 1
    host_core: Optional[frozenset] = field(default=None, compare=False)
    host_interface: Optional[dict] = field(default=None, compare=False)
    host_root: Optional[int] = field(default=None, compare=False)

    def interface_subgraph(self) -> Tuple[LabeledGraph, dict]:
        sub, to_frag = induced_subgraph(self.fragment, self.interface_nodes)
        return sub, to_frag


def _interface_certificate(
    fragment: LabeledGraph, interface_nodes, marks
) -> Certificate:
    sub, to_frag = induced_subgraph(fragment, interface_nodes)
    sub_marks = {new: marks[old] for new, old in to_frag.items()}
    return certificate(sub, sub_marks)


def _build_cip(
    g: LabeledGraph,
    root_for_fragment: int,
    core: set,
    interface_dists: dict,
    params: CipParams,
    extra_interface_cert: Optional[Certificate] = None,
) -> CIP:
    keep = sorted(core) + sorted(interface_dists)
    sub, to_base = induced_subgraph(g, keep)
    base_to_new = {old: new for new, old in to_base.items()}
    marks = {}
    for v in core:
        marks[base_to_new[v]] = CORE_MARK
    for v, d in interface_dists.items():
        marks[base_to_new[v]] = interface_mark(d)
    new_root = base_to_new[root_for_fragment]
    core_new = frozenset(base_to_new[v] for v in core)
    iface_new = frozenset(base_to_new[v] for v in interface_dists)
    icert = _interface_certificate(sub, iface_new, marks)
    if extra_interface_cert is not None:
        icert = combine_certs(icert, extra_interface_cert)
    root_marks = dict(marks)
    root_marks[new_root] = marks[new_root] + "*"
    ccert = certificate(sub, root_marks)
    return CIP(
        fragment=sub,
        marks=marks,
        root=new_root,
        core_nodes=core_new,
        interface_nodes=iface_new,
        interface_cert=icert,
        core_cert=ccert,
        params=params,
        host_core=frozenset(core),
        host_interface=dict(interface_dists),
        host_root=root_for_fragment,
    )


def extract_cip(
    g: LabeledGraph,
    coarse: Optional[CoarseningResult],
    root: int,
    p: CipParams,
) -> CIP:
    """Extract the CIP rooted at ``root``.

    Flat mode (coarse is None): core is the radius-R ball around root, the
    interface the (R, R+T] shell, marked with distance-to-core. Coarsened
    mode: root is a coarse node; the core is the base preimage of the coarse
    radius-R ball, the base interface reaches B steps from the core, and the
    coarse (R, R+T] shell certificate is folded into the interface key.
    """
    if p.coarsened:
        if coarse is None:
            raise GrammarError("coarsened extraction requires a coarsening")
        cg = coarse.coarse
        if not cg.has_node(root):
            raise GraphError(f"unknown coarse root {root}")
        coarse_core = neighborhood(cg, root, p.radius)
        base_core = set()
        for c in coarse_core:
            base_core |= coarse.coarse_to_base[c]
        base_dists = distances_from(g, base_core, cap=p.base_thickness)
        interface_dists = {v: d for v, d in base_dists.items() if d > 0}
        coarse_dists = distances_from(cg, [root], cap=p.radius + p.thickness)
        coarse_iface = {
            c: d - p.radius for c, d in coarse_dists.items() if d > p.radius
        }
        csub, to_coarse = induced_subgraph(cg, coarse_iface)
        cmarks = {
            new: interface_mark(coarse_iface[old]) for new, old in to_coarse.items()
        }
        coarse_cert = certificate(csub, cmarks)
        root_base = min(coarse.coarse_to_base[root])
        return _build_cip(
            g, root_base, base_core, interface_dists, p, coarse_cert
        )
    if coarse is not None:
        raise GrammarError("flat extraction must not receive a coarsening")
    if not g.has_node(root):
        raise GraphError(f"unknown root {root}")
    dists = distances_from(g, [root], cap=p.radius + p.thickness)
    core = {v for v, d in dists.items() if d <= p.radius}
    interface_dists = {v: d - p.radius for v, d in dists.items() if d > p.radius}
    return _build_cip(g, root, core, interface_dists, p)


@dataclass
class Grammar:
    """Productions per (params, interface certificate) with counts.

    ``productions`` maps a params key to {interface_cert: {core_cert: CIP}};
    the CIP's ``count`` field carries the aggregated occurrence count.
    """

    param_grid: List[CipParams]
    min_count: int = 1
    coarsener_name: str = "none"
    productions: Dict[tuple, Dict[Certificate, Dict[Certificate, CIP]]] = field(
        default_factory=dict
    )

    @property
    def coarsened(self) -> bool:
        return any(p.coarsened for p in self.param_grid)

    def add(self, cip: CIP) -> None:
        by_iface = self.productions.setdefault(cip.params.key(), {})
        by_core = by_iface.setdefault(cip.interface_cert, {})
        prev = by_core.get(cip.core_cert)
        if prev is None:
            by_core[cip.core_cert] = replace(
                cip, host_core=None, host_interface=None, host_root=None
            )
        else:
            by_core[cip.core_cert] = replace(prev, count=prev.count + cip.count)

    def lookup(self, interface_cert: Certificate) -> List[CIP]:
        """All stored CIPs matching the interface, across parameter combos."""
        merged: Dict[Certificate, CIP] = {}
        for by_iface in self.productions.values():
            for ccert, cip in by_iface.get(interface_cert, {}).items():
                prev = merged.get(ccert)
                if prev is None:
                    merged[ccert] = cip
                else:
                    merged[ccert] = replace(prev, count=prev.count + cip.count)
        return [merged[c] for c in sorted(merged)]

    def filtered(self, min_count: int) -> "Grammar":
        out = Grammar(
            param_grid=list(self.param_grid),
            min_count=min_count,
            coarsener_name=self.coarsener_name,
        )
        for pkey, by_iface in self.productions.items():
            for icert, by_core in by_iface.items():
                for ccert, cip in by_core.items():
                    if cip.count >= min_count:
                        out.productions.setdefault(pkey, {}).setdefault(
                            icert, {}
                        )[ccert] = cip
        return out

    def n_productions(self) -> int:
        return sum(
            len(by_core)
            for by_iface in self.productions.values()
            for by_core in by_iface.values()
        )

    def productive_interfaces(self) -> int:
        seen: Dict[Certificate, set] = {}
        for by_iface in self.productions.values():
            for icert, by_core in by_iface.items():
                seen.setdefault(icert, set()).update(by_core)
        return sum(1 for cores in seen.values() if len(cores) >= 2)


def induce(
    corpus: Sequence[LabeledGraph],
    coarsener: Optional[Callable],
    param_grid: Sequence[CipParams],
    min_count: int = 1,
    coarsener_name: str = "none",
) -> Grammar:
    """Extract CIPs at every (coarse) node of every graph for every params
    combination, aggregate by (interface, core) certificate, and drop
    productions seen fewer than ``min_count`` times."""
    corpus = list(corpus)
    if not corpus:
        raise GrammarError("cannot induce a grammar from an empty corpus")
    if not param_grid:
        raise ConfigError("param_grid must be non-empty")
    gr = Grammar(
        param_grid=list(param_grid),
        min_count=min_count,
        coarsener_name=coarsener_name,
    )
    for g in corpus:
        coarse = coarsener(g) if coarsener is not None else None
        for p in param_grid:
            if p.coarsened and coarse is None:
                raise GrammarError(
                    "coarsened params require a coarsener at induction"
                )
            roots = coarse.coarse.node_ids() if p.coarsened else g.node_ids()
            for root in roots:
                gr.add(extract_cip(g, coarse if p.coarsened else None, root, p))
    if min_count > 1:
        gr = gr.filtered(min_count)
    return gr


# -- substitution -------------------------------------------------------------


@dataclass(frozen=True)
class Substitution:
    """Result of replacing a core: the product graph plus site bookkeeping."""

    graph: LabeledGraph
    new_root: int
    inserted_core: frozenset
    interface_map: dict  # new fragment interface id -> product graph id


def substitute(g: LabeledGraph, old: CIP, new: CIP) -> LabeledGraph:
    """Replace ``old``'s core in g by ``new``'s core (see substitute_info)."""
    return substitute_info(g, old, new).graph


def substitute_info(g: LabeledGraph, old: CIP, new: CIP) -> Substitution:
    """Interface-preserving core replacement.

    ``old`` must be an in-place CIP extracted from g (host fields set) and
    ``new`` a CIP with equal interface certificate. The mapping between the
    two interfaces is recomputed exactly; certificate equality alone is only
    a pre-filter, so a failed search raises CertificateCollisionError.
    """
    if old.host_core is None or old.host_interface is None:
        raise GrammarError("old CIP does not reference a host site")
    if old.interface_cert != new.interface_cert:
        raise GrammarError("interface certificates differ; cannot substitute")

    old_iface_sub, old_to_host_frag = old.interface_subgraph()
    new_iface_sub, new_to_frag = new.interface_subgraph()
    old_marks = {v: old.marks[old_to_host_frag[v]] for v in old_iface_sub.node_ids()}
    new_marks = {v: new.marks[new_to_frag[v]] for v in new_iface_sub.node_ids()}
    iso = find_isomorphism(new_iface_sub, old_iface_sub, new_marks, old_marks)
    if iso is None:
        raise CertificateCollisionError(
            "interface certificates match but graphs are not isomorphic"
        )
    # fragment ids were compacted from the sorted host node set, so position
    # recovers the host id of every old-fragment node
    host_sorted = sorted(old.host_core | set(old.host_interface))
    old_sub_to_host = {
        sub_id: host_sorted[frag_id]
        for sub_id, frag_id in old_to_host_frag.items()
    }
    # new fragment interface id -> host id
    frag_to_host = {
        new_to_frag[new_sub_id]: old_sub_to_host[old_sub_id]
        for new_sub_id, old_sub_id in iso.items()
    }

    # product graph: host minus old core, plus new core nodes
    keep = [v for v in g.node_ids() if v not in old.host_core]
    new_core_sorted = sorted(new.core_nodes)
    nodes = []
    remap_host = {}
    for i, v in enumerate(keep):
        remap_host[v] = i
        nodes.append((i, g.label(v), g.cid(v)))
    remap_core = {}
    for k, v in enumerate(new_core_sorted):
        nid = len(keep) + k
        remap_core[v] = nid
        nodes.append((nid, new.fragment.label(v), None))
    edges = []
    for a, b, label in g.edges():
        if a in old.host_core or b in old.host_core:
            continue
        edges.append((remap_host[a], remap_host[b], label))
    for a, b, label in new.fragment.edges():
        a_core = a in new.core_nodes
        b_core = b in new.core_nodes
        if a_core and b_core:
            edges.append((remap_core[a], remap_core[b], label))
        elif a_core or b_core:
            core_v, iface_v = (a, b) if a_core else (b, a)
            host_v = frag_to_host[iface_v]
            edges.append((remap_core[core_v], remap_host[host_v], label))
        # interface-interface edges already exist in the host
    product = LabeledGraph(nodes, edges)
    return Substitution(
        graph=product,
        new_root=remap_core[new.root],
        inserted_core=frozenset(remap_core.values()),
        interface_map={v: remap_host[h] for v, h in frag_to_host.items()},
    )


# -- proposals ----------------------------------------------------------------

N_ATTEMPTS_DEFAULT = 30


@dataclass(frozen=True)
class Proposal:
    graph: LabeledGraph
    root: int
    params: CipParams
    old_interface_cert: Certificate
    old_core_cert: Certificate
    new_core_cert: Certificate
    new_root: int


def propose_info(
    gr: Grammar,
    g: LabeledGraph,
    coarsener: Optional[Callable],
    rng: random.Random,
    n_attempts: int = N_ATTEMPTS_DEFAULT,
) -> Optional[Proposal]:
    """One grammar move: random root and params, certificate lookup, uniform
    choice among cores different from the current one. None if ``n_attempts``
    roots yield no applicable productive rule."""
    if g.n == 0:
        raise GraphError("cannot propose on an empty graph")
    coarse = None
    if gr.coarsened:
        if coarsener is None:
            raise GrammarError("coarsened grammar requires a coarsener")
        coarse = coarsener(g)
    for _ in range(n_attempts):
        params = gr.param_grid[rng.randrange(len(gr.param_grid))]
        pool = coarse.coarse.node_ids() if params.coarsened else g.node_ids()
        root = pool[rng.randrange(len(pool))]
        current = extract_cip(g, coarse if params.coarsened else None, root, params)
        candidates = [
            cip
            for cip in gr.lookup(current.interface_cert)
            if cip.core_cert != current.core_cert
        ]
        if not candidates:
            continue
        chosen = candidates[rng.randrange(len(candidates))]
        try:
            sub = substitute_info(g, current, chosen)
        except CertificateCollisionError:
            continue  # logged by caller if needed; retry with a fresh root
        return Proposal(
            graph=sub.graph,
            root=root,
            params=params,
            old_interface_cert=current.interface_cert,
            old_core_cert=current.core_cert,
            new_core_cert=chosen.core_cert,
            new_root=sub.new_root,
        )
    return None


def propose(
    gr: Grammar,
    g: LabeledGraph,
    coarsener: Optional[Callable],
    rng: random.Random,
    n_attempts: int = N_ATTEMPTS_DEFAULT,
) -> Optional[LabeledGraph]:
    out = propose_info(gr, g, coarsener, rng, n_attempts)
    return out.graph if out is not None else None


# -- serialization ------------------------------------------------------------


def _cip_to_dict(cip: CIP) -> dict:
    return {
        "fragment": {
            "nodes": [
                {"id": v, "label": cip.fragment.label(v)}
                for v in cip.fragment.node_ids()
            ],
            "edges": [
                {"a": a, "b": b, "label": label}
                for a, b, label in cip.fragment.edges()
            ],
        },
        "marks": {str(v): m for v, m in sorted(cip.marks.items())},
        "root": cip.root,
        "interface_cert": cert_hex(cip.interface_cert),
        "core_cert": cert_hex(cip.core_cert),
        "count": cip.count,
    }


def _cip_from_dict(d: dict, params: CipParams) -> CIP:
    frag = LabeledGraph(
        [(n["id"], n["label"]) for n in d["fragment"]["nodes"]],
        [(e["a"], e["b"], e["label"]) for e in d["fragment"]["edges"]],
    )
    marks = {int(v): m for v, m in d["marks"].items()}
    core = frozenset(v for v, m in marks.items() if m == CORE_MARK)
    iface = frozenset(v for v in marks if v not in core)
    return CIP(
        fragment=frag,
        marks=marks,
        root=d["root"],
        core_nodes=core,
        interface_nodes=iface,
        interface_cert=int(d["interface_cert"], 16),
        core_cert=int(d["core_cert"], 16),
        params=params,
        count=d["count"],
    )


def grammar_to_dict(gr: Grammar) -> dict:
    combos = [
        {
            "radius": p.radius,
            "thickness": p.thickness,
            "base_thickness": p.base_thickness,
            "coarsened": p.coarsened,
        }
        for p in gr.param_grid
    ]
    productions = []
    for ci, p in enumerate(gr.param_grid):
        by_iface = gr.productions.get(p.key(), {})
        for icert in sorted(by_iface):
            for ccert in sorted(by_iface[icert]):
                entry = _cip_to_dict(by_iface[icert][ccert])
                entry["combo"] = ci
                productions.append(entry)
    return {
        "format": _GRAMMAR_FORMAT,
        "version": _GRAMMAR_VERSION,
        "coarsener": gr.coarsener_name,
        "min_count": gr.min_count,
        "combos": combos,
        "productions": productions,
    }


def grammar_from_dict(d: dict) -> Grammar:
    if d.get("format") != _GRAMMAR_FORMAT:
        raise GrammarError("not a grammargen grammar file")
    if d.get("version") != _GRAMMAR_VERSION:
        raise GrammarError(f"unsupported grammar version {d.get('version')}")
    param_grid = [
        CipParams(
            radius=c["radius"],
            thickness=c["thickness"],
            base_thickness=c["base_thickness"],
            coarsened=c["coarsened"],
        )
        for c in d["combos"]
    ]
    gr = Grammar(
        param_grid=param_grid,
        min_count=d["min_count"],
        coarsener_name=d.get("coarsener", "none"),
    )
    for entry in d["productions"]:
        params = param_grid[entry["combo"]]
        cip = _cip_from_dict(entry, params)
        gr.productions.setdefault(params.key(), {}).setdefault(
            cip.interface_cert, {}
        )[cip.core_cert] = cip
    return gr


def save_grammar(gr: Grammar, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(grammar_to_dict(gr), fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def load_grammar(path) -> Grammar:
    with open(path, "r", encoding="utf-8") as fh:
        return grammar_from_dict(json.load(fh))
