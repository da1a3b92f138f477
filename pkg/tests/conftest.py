import random

import pytest

from grammargen.graphs import LabeledGraph
from grammargen.rna import RnaStructure, structure_to_graph
from grammargen.synthetic import random_labeled_graph


@pytest.fixture
def path5():
    return LabeledGraph(
        [(0, "a"), (1, "b"), (2, "c"), (3, "d"), (4, "e")],
        [(0, 1, "e"), (1, 2, "e"), (2, 3, "e"), (3, 4, "e")],
    )


@pytest.fixture
def hairpin_graph():
    """9-nt hairpin: backbone path plus pairs (0,8),(1,7),(2,6)."""
    s = RnaStructure("GGGAAACCC", frozenset({(0, 8), (1, 7), (2, 6)}))
    return structure_to_graph(s)


def permuted(g: LabeledGraph, rng: random.Random) -> LabeledGraph:
    ids = list(g.node_ids())
    shuffled = ids[:]
    rng.shuffle(shuffled)
    mapping = dict(zip(ids, shuffled))
    nodes = [(mapping[v], g.label(v), g.cid(v)) for v in ids]
    edges = [(mapping[a], mapping[b], l) for a, b, l in g.edges()]
    return LabeledGraph(nodes, edges)


def random_graphs(count, seed, **kw):
    rng = random.Random(seed)
    return [random_labeled_graph(rng, **kw) for _ in range(count)]
