"""Synthetic corpora: template-generated RNA families and random labeled
graphs. Used by the test suite and handy for CLI demos.
"""
from __future__ import annotations

import random
from typing import List, Optional

from .graphs import LabeledGraph
from .rna import RnaStructure, pairs_from_dot_bracket

_COMPLEMENT = {"A": "U", "U": "A", "C": "G", "G": "C"}
_LOOPS = ["AAA", "GAAA", "UUCG", "AAUAA", "GCAA", "AACAA"]
_DANGLES = ["", "A", "AA", "GA", "AAG"]


def _stem_sequence(rng: random.Random, length: int) -> str:
    return "".join(rng.choice("ACGU") for _ in range(length))


def hairpin_family(
    n: int, seed: int = 0, stem_range=(3, 5), loops: Optional[List[str]] = None
) -> List[RnaStructure]:
    """Hairpins from a hand-written template: dangle + stem(loop) + dangle.

    Stem halves are exact complements, so every instance folds back to a
    hairpin-like optimum.
    """
    rng = random.Random(seed)
    loops = loops or _LOOPS
    out = []
    for _ in range(n):
        stem_len = rng.randint(*stem_range)
        stem = _stem_sequence(rng, stem_len)
        loop = rng.choice(loops)
        left = rng.choice(_DANGLES)
        right = rng.choice(_DANGLES)
        rc = "".join(_COMPLEMENT[c] for c in reversed(stem))
        seq = left + stem + loop + rc + right
        db = (
            "." * len(left)
            + "(" * stem_len
            + "." * len(loop)
            + ")" * stem_len
            + "." * len(right)
        )
        out.append(RnaStructure(seq, pairs_from_dot_bracket(db)))
    return out


def cloverleaf_family(n: int, seed: int = 0, arms=2) -> List[RnaStructure]:
    """Multiloop structures: one closing stem plus ``arms`` hairpin arms."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        outer = _stem_sequence(rng, rng.randint(2, 3))
        seq_parts = [outer]
        db_parts = ["(" * len(outer)]
        for a in range(arms):
            gap = rng.choice(["A", "AA"])
            seq_parts.append(gap)
            db_parts.append("." * len(gap))
            stem = _stem_sequence(rng, rng.randint(2, 3))
            loop = rng.choice(_LOOPS[:4])
            rc = "".join(_COMPLEMENT[c] for c in reversed(stem))
            seq_parts.append(stem + loop + rc)
            db_parts.append("(" * len(stem) + "." * len(loop) + ")" * len(stem))
        gap = rng.choice(["A", "AA"])
        seq_parts.append(gap)
        db_parts.append("." * len(gap))
        rc_outer = "".join(_COMPLEMENT[c] for c in reversed(outer))
        seq_parts.append(rc_outer)
        db_parts.append(")" * len(outer))
        seq = "".join(seq_parts)
        db = "".join(db_parts)
        out.append(RnaStructure(seq, pairs_from_dot_bracket(db)))
    return out


def random_labeled_graph(
    rng: random.Random,
    n_min: int = 2,
    n_max: int = 10,
    labels: str = "abc",
    edge_labels: str = "xy",
    connected: bool = True,
) -> LabeledGraph:
    """Random connected labeled graph: a random spanning tree plus extras."""
    n = rng.randint(n_min, n_max)
    nodes = [(i, rng.choice(labels)) for i in range(n)]
    edges = {}
    if connected:
        for i in range(1, n):
            j = rng.randrange(i)
            edges[(j, i)] = rng.choice(edge_labels)
    extra = rng.randint(0, n)
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        if key not in edges:
            edges[key] = rng.choice(edge_labels)
    return LabeledGraph(nodes, [(a, b, l) for (a, b), l in sorted(edges.items())])


def random_graph_set(
    n_graphs: int, seed: int = 0, labels: str = "abc", **kw
) -> List[LabeledGraph]:
    rng = random.Random(seed)
    return [random_labeled_graph(rng, labels=labels, **kw) for _ in range(n_graphs)]
