"""RNA secondary structure: dot-bracket parsing, validation, Nussinov folding,
and conversion between structures and nucleotide-level labeled graphs.

Graph encoding: one node per nucleotide labeled A/C/G/U, backbone edges
labeled "b", base-pair edges labeled "p".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import backend
from .errors import ParseError, StructureError, TransformError
from .graphs import LabeledGraph

ALPHABET = "ACGU"
_CODE = {c: i for i, c in enumerate(ALPHABET)}
BACKBONE = "b"
PAIR = "p"

DEFAULT_MINLOOP = 3


def _complementary(a: str, b: str, wobble: bool) -> bool:
    pair = frozenset((a, b))
    if pair in (frozenset("AU"), frozenset("CG")):
        return True
    return wobble and pair == frozenset("GU")


@dataclass(frozen=True)
class RnaStructure:
    """Sequence over ACGU plus a non-crossing base-pair set.

    Pairs are (i, j) with i < j, at most one pair per index, complementary
    (A-U, C-G, and G-U unless wobble is disabled), and j - i > minloop.
    """

    sequence: str
    pairs: frozenset = field(default_factory=frozenset)
    minloop: int = DEFAULT_MINLOOP
    wobble: bool = True

    def __post_init__(self):
        seq = self.sequence
        for c in seq:
            if c not in _CODE:
                raise StructureError(f"invalid nucleotide {c!r}")
        pairs = frozenset((int(i), int(j)) for i, j in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen = set()
        for i, j in pairs:
            if not (0 <= i < j < len(seq)):
                raise StructureError(f"pair ({i},{j}) out of range")
            if j - i <= self.minloop:
                raise StructureError(
                    f"pair ({i},{j}) violates minloop {self.minloop}"
                )
            if not _complementary(seq[i], seq[j], self.wobble):
                raise StructureError(
                    f"pair ({i},{j}) not complementary: {seq[i]}-{seq[j]}"
                )
            for k in (i, j):
                if k in seen:
                    raise StructureError(f"index {k} in more than one pair")
                seen.add(k)
        ordered = sorted(pairs)
        for x, (i, j) in enumerate(ordered):
            for k, l in ordered[x + 1 :]:
                if k >= j:
                    break
                if k > i and l > j:
                    raise StructureError(
                        f"crossing pairs ({i},{j}) and ({k},{l})"
                    )

    def __len__(self):
        return len(self.sequence)

    def partner_map(self) -> dict:
        out = {}
        for i, j in self.pairs:
            out[i] = j
            out[j] = i
        return out

    def to_dot_bracket(self) -> str:
        chars = ["."] * len(self.sequence)
        for i, j in self.pairs:
            chars[i] = "("
            chars[j] = ")"
        return "".join(chars)


def pairs_from_dot_bracket(db: str, line=None) -> frozenset:
    """Stack-matching of '(' / ')' / '.'; raises ParseError when unbalanced."""
    stack = []
    pairs = set()
    for i, c in enumerate(db):
        if c == "(":
            stack.append(i)
        elif c == ")":
            if not stack:
                raise ParseError(f"unbalanced ')' at position {i}", line)
            pairs.add((stack.pop(), i))
        elif c != ".":
            raise ParseError(f"invalid structure character {c!r}", line)
    if stack:
        raise ParseError(f"unbalanced '(' at position {stack[-1]}", line)
    return frozenset(pairs)


def parse_dot_bracket(text: str, minloop=DEFAULT_MINLOOP, wobble=True) -> list:
    """Parse FASTA-like records: '>name' line, sequence line, structure line.

    Returns a list of (name, RnaStructure). Errors carry the line number of
    the offending record.
    """
    lines = text.splitlines()
    records = []
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if not line.startswith(">"):
            raise ParseError(f"expected '>name' header, got {line!r}", i + 1)
        name = line[1:].strip()
        if i + 2 >= len(lines):
            raise ParseError(f"record {name!r} truncated", i + 1)
        seq = lines[i + 1].strip().upper()
        db = lines[i + 2].strip()
        if len(seq) != len(db):
            raise ParseError(
                f"sequence length {len(seq)} != structure length {len(db)}",
                i + 3,
            )
        pairs = pairs_from_dot_bracket(db, line=i + 3)
        try:
            records.append(
                (name, RnaStructure(seq, pairs, minloop=minloop, wobble=wobble))
            )
        except StructureError as exc:
            raise ParseError(str(exc), i + 2) from None
        i += 3
    return records


def format_dot_bracket(records: Iterable) -> str:
    out = []
    for name, s in records:
        out.append(f">{name}\n{s.sequence}\n{s.to_dot_bracket()}\n")
    return "".join(out)


def nussinov_fold(
    sequence: str, minloop: int = DEFAULT_MINLOOP, wobble: bool = True
) -> RnaStructure:
    """Maximum-pairing fold via dynamic programming, deterministically traced.

    Ties prefer pairing the left end over leaving it unpaired and, among
    partners, the smallest split index.
    """
    if not sequence:
        raise StructureError("empty sequence")
    seq = sequence.upper()
    try:
        codes = np.array([_CODE[c] for c in seq], dtype=np.uint8)
    except KeyError as exc:
        raise StructureError(f"invalid nucleotide {exc.args[0]!r}") from None
    arr = backend.fold_pairs(codes, minloop, wobble)
    pairs = frozenset((int(i), int(j)) for i, j in arr)
    return RnaStructure(seq, pairs, minloop=minloop, wobble=wobble)


def structure_to_graph(s: RnaStructure) -> LabeledGraph:
    """Nucleotide-level graph: backbone edges "b", pair edges "p"."""
    n = len(s.sequence)
    nodes = [(i, s.sequence[i]) for i in range(n)]
    edges = [(i, i + 1, BACKBONE) for i in range(n - 1)]
    edges += [(i, j, PAIR) for i, j in sorted(s.pairs)]
    return LabeledGraph(nodes, edges)


def backbone_order(g: LabeledGraph) -> list:
    """Node ids in 5'->3' order along the backbone.

    The "b"-labeled edges must form a simple path covering every node. Of
    the two traversal directions the one starting at the smaller-id endpoint
    is used, so the result is deterministic for a given graph.
    """
    ids = g.node_ids()
    if not ids:
        raise TransformError("empty graph has no backbone")
    b_adj = {v: [] for v in ids}
    for a, b, label in g.edges():
        if label == BACKBONE:
            b_adj[a].append(b)
            b_adj[b].append(a)
    if len(ids) == 1:
        return [ids[0]]
    ends = sorted(v for v in ids if len(b_adj[v]) == 1)
    if len(ends) != 2 or any(len(nb) > 2 for nb in b_adj.values()):
        raise TransformError("backbone is not a simple path")
    order = [ends[0]]
    prev = None
    cur = ends[0]
    while True:
        nxt = [w for w in b_adj[cur] if w != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    if len(order) != len(ids):
        raise TransformError("backbone does not cover all nucleotides")
    return order


def graph_to_structure(
    g: LabeledGraph, minloop=DEFAULT_MINLOOP, wobble=True
) -> tuple:
    """Read (RnaStructure, backbone order) off a nucleotide graph."""
    order = backbone_order(g)
    pos = {v: i for i, v in enumerate(order)}
    seq = "".join(g.label(v) for v in order)
    pairs = set()
    for a, b, label in g.edges():
        if label == PAIR:
            i, j = sorted((pos[a], pos[b]))
            pairs.add((i, j))
        elif label != BACKBONE:
            raise TransformError(f"unexpected edge label {label!r} in RNA graph")
    structure = RnaStructure(seq, frozenset(pairs), minloop=minloop, wobble=wobble)
    return structure, order
