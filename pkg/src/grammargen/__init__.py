"""Coarsened core-interface-pair graph grammars: induction, MH sampling,
and kernel-based evaluation, with RNA and molecular-ring coarseners."""

__version__ = "0.1.0"

from .backend import backend_name
from .coarsen import (
    CoarseningResult,
    annotate_molecule_rings,
    annotate_rna,
    contract,
    molecule_coarsener,
    rna_coarsener,
)
from .errors import GrammargenError
from .estimator import Hyperparams, OneClassModel, fit, probabilities_over, score
from .evalkit import EvalConfig, EvalReport, evaluate, rna_validity_filters, symmetrized_kl
from .graphs import (
    LabeledGraph,
    graph_from_json,
    graph_to_json,
    induced_subgraph,
    is_connected,
    neighborhood,
)
from .certs import certificate, find_isomorphism
from .grammar import CIP, CipParams, Grammar, extract_cip, induce, propose, substitute
from .kernel import KernelParams, SparseVector, internal_diversity, kernel, set_similarity, vectorize
from .rna import RnaStructure, nussinov_fold, parse_dot_bracket
from .sampler import ChainRecord, SamplerConfig, accept, rna_transformer, run_chain

__all__ = [
    "__version__",
    "backend_name",
    "CoarseningResult",
    "annotate_molecule_rings",
    "annotate_rna",
    "contract",
    "molecule_coarsener",
    "rna_coarsener",
    "GrammargenError",
    "Hyperparams",
    "OneClassModel",
    "fit",
    "probabilities_over",
    "score",
    "EvalConfig",
    "EvalReport",
    "evaluate",
    "rna_validity_filters",
    "symmetrized_kl",
    "LabeledGraph",
    "graph_from_json",
    "graph_to_json",
    "induced_subgraph",
    "is_connected",
    "neighborhood",
    "certificate",
    "find_isomorphism",
    "CIP",
    "CipParams",
    "Grammar",
    "extract_cip",
    "induce",
    "propose",
    "substitute",
    "KernelParams",
    "SparseVector",
    "internal_diversity",
    "kernel",
    "set_similarity",
    "vectorize",
    "RnaStructure",
    "nussinov_fold",
    "parse_dot_bracket",
    "ChainRecord",
    "SamplerConfig",
    "accept",
    "rna_transformer",
    "run_chain",
]
