"""Metropolis-Hastings chain over graphs: grammar proposals, feasibility
transformation, estimator scoring, ratio acceptance.

The built-in "rna-refold" transformer strips all base-pair edges, reads the
sequence off the backbone, and reinstalls the pairs computed by the Nussinov
folder, so acceptance is always evaluated on viable RNA structures.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from ._hashutil import derive_seed
from .errors import ConfigError, GrammarError, TransformError
from .estimator import OneClassModel, score
from .graphs import LabeledGraph
from .grammar import Grammar, propose_info
from .kernel import KernelParams, vectorize
from .rna import (
    BACKBONE,
    DEFAULT_MINLOOP,
    PAIR,
    backbone_order,
    nussinov_fold,
)

# re-exported: the folder is part of this module's public surface
__all__ = [
    "SamplerConfig",
    "ChainRecord",
    "nussinov_fold",
    "rna_transformer",
    "accept",
    "run_chain",
    "get_transformer",
    "TRANSFORMERS",
]


def rna_transformer(g: LabeledGraph) -> LabeledGraph:
    """Map a candidate RNA graph to a feasible one by refolding.

    Deletes every pair edge, refolds the backbone sequence, reinstalls the
    new pairs; node ids and cids are preserved. Idempotent. Raises
    TransformError when the backbone is not a simple covering path.
    """
    order = backbone_order(g)
    seq = "".join(g.label(v) for v in order)
    structure = nussinov_fold(seq, minloop=DEFAULT_MINLOOP, wobble=True)
    nodes = [(v, g.label(v), g.cid(v)) for v in g.node_ids()]
    edges = [(a, b, label) for a, b, label in g.edges() if label == BACKBONE]
    for i, j in sorted(structure.pairs):
        edges.append((order[i], order[j], PAIR))
    return LabeledGraph(nodes, edges)


TRANSFORMERS: Dict[str, Callable] = {
    "none": lambda g: g,
    "rna-refold": rna_transformer,
}


def get_transformer(name: Optional[str]) -> Callable:
    key = name or "none"
    try:
        return TRANSFORMERS[key]
    except KeyError:
        raise ConfigError(
            f"unknown transformer {name!r}; choose from {sorted(TRANSFORMERS)}"
        ) from None


def register_transformer(name: str, fn: Callable) -> None:
    """Register a custom candidate->feasible transformation."""
    TRANSFORMERS[name] = fn


@dataclass(frozen=True)
class SamplerConfig:
    steps: int
    burn_in: int = 0
    sample_interval: int = 1
    n_attempts: int = 30
    seed: int = 0
    transformer: str = "none"
    accept_floor: float = 1e-9
    kernel: KernelParams = field(default_factory=KernelParams)

    def __post_init__(self):
        if self.steps < self.burn_in:
            raise ConfigError("steps must be >= burn_in")
        if self.sample_interval < 1:
            raise ConfigError("sample_interval must be >= 1")
        if not 0 < self.accept_floor < 1:
            raise ConfigError("accept_floor must lie in (0, 1)")


@dataclass(frozen=True)
class ChainRecord:
    step: int
    graph: LabeledGraph
    score: float
    accepted: bool


def accept(score_old: float, score_new: float, rng: random.Random) -> bool:
    """Metropolis ratio rule: accept with probability min(1, new/old)."""
    if score_new >= score_old:
        return True
    return rng.random() < score_new / score_old


def run_chain(
    seed_graph: LabeledGraph,
    gr: Grammar,
    model: OneClassModel,
    coarsener: Optional[Callable],
    cfg: SamplerConfig,
    chain_index: int = 0,
) -> List[ChainRecord]:
    """One seeded chain: propose -> transform -> score -> accept.

    Rejections (including transformer failures and exhausted proposals)
    keep the previous state. Records are emitted every sample_interval
    steps after burn_in. Deterministic given (inputs, cfg.seed, chain_index).
    """
    if gr.n_productions() == 0:
        raise GrammarError("grammar is empty")
    transformer = get_transformer(cfg.transformer)
    rng = random.Random(derive_seed(cfg.seed, chain_index))

    current = transformer(seed_graph)
    current_score = max(score(model, vectorize(current, cfg.kernel)), cfg.accept_floor)
    records: List[ChainRecord] = []
    for step in range(1, cfg.steps + 1):
        accepted = False
        proposal = propose_info(gr, current, coarsener, rng, cfg.n_attempts)
        if proposal is None:
            if step == 1 and gr.productive_interfaces() == 0:
                raise GrammarError("grammar cannot move seed")
        else:
            try:
                candidate = transformer(proposal.graph)
            except TransformError:
                candidate = None
            if candidate is not None:
                cand_score = max(
                    score(model, vectorize(candidate, cfg.kernel)),
                    cfg.accept_floor,
                )
                if accept(current_score, cand_score, rng):
                    current = candidate
                    current_score = cand_score
                    accepted = True
        if step > cfg.burn_in and (step - cfg.burn_in) % cfg.sample_interval == 0:
            records.append(
                ChainRecord(
                    step=step,
                    graph=current,
                    score=current_score,
                    accepted=accepted,
                )
            )
    return records


def run_chains(
    seed_graphs: List[LabeledGraph],
    gr: Grammar,
    model: OneClassModel,
    coarsener: Optional[Callable],
    cfg: SamplerConfig,
    n_chains: int,
    threads: int = 1,
) -> List[List[ChainRecord]]:
    """Independent chains; chain k starts from seed_graphs[k % len(seeds)]
    with its own rng stream derived from (cfg.seed, k)."""
    if not seed_graphs:
        raise ConfigError("need at least one seed graph")
    args = [
        (seed_graphs[k % len(seed_graphs)], gr, model, coarsener, cfg, k)
        for k in range(n_chains)
    ]
    if threads > 1 and n_chains > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_run_chain_star, args))
    return [run_chain(*a) for a in args]


def _run_chain_star(args):
    return run_chain(*args)
