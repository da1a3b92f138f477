"""Evaluation battery: symmetrized KL divergence between real and generated
sets via paired one-class models, normalized set similarity, internal
diversity, and the four RNA validity filters.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ._hashutil import derive_seed
from .errors import ConfigError, EstimatorError
from .estimator import Hyperparams, fit, probabilities_over
from .graphs import LabeledGraph
from .kernel import KernelParams, internal_diversity, set_similarity, vectorize


@dataclass(frozen=True)
class EvalConfig:
    kernel: KernelParams = field(default_factory=KernelParams)
    hyper: Hyperparams = field(default_factory=Hyperparams)
    folds: int = 5
    reps: int = 7
    seed: int = 0


@dataclass(frozen=True)
class EvalReport:
    symmetrized_kl: float
    kl_per_rep: Tuple[float, ...]
    kl_per_fold: Tuple[Tuple[float, ...], ...]
    set_similarity: float
    intdiv1: float
    intdiv2: float
    real_intdiv1: float
    real_intdiv2: float
    filter_pass_fraction: float
    fold_count: int

    def to_dict(self) -> dict:
        return {
            "symmetrized_kl": self.symmetrized_kl,
            "kl_per_rep": list(self.kl_per_rep),
            "kl_per_fold": [list(r) for r in self.kl_per_fold],
            "set_similarity": self.set_similarity,
            "intdiv1": self.intdiv1,
            "intdiv2": self.intdiv2,
            "real_intdiv1": self.real_intdiv1,
            "real_intdiv2": self.real_intdiv2,
            "filter_pass_fraction": self.filter_pass_fraction,
            "fold_count": self.fold_count,
        }


def _median(values: Sequence[float]) -> float:
    vs = sorted(values)
    n = len(vs)
    mid = n // 2
    if n % 2 == 1:
        return vs[mid]
    return 0.5 * (vs[mid - 1] + vs[mid])


def _fold_splits(n: int, folds: int, rng: random.Random) -> List[List[int]]:
    order = list(range(n))
    rng.shuffle(order)
    out = []
    base = n // folds
    extra = n % folds
    start = 0
    for f in range(folds):
        size = base + (1 if f < extra else 0)
        out.append(order[start : start + size])
        start += size
    return out


def symmetrized_kl(
    real_set: Sequence[LabeledGraph],
    gen_set: Sequence[LabeledGraph],
    kp: KernelParams = KernelParams(),
    hp: Hyperparams = Hyperparams(),
    folds: int = 5,
    seed: int = 0,
    real_vectors=None,
    gen_vectors=None,
) -> float:
    """Median over folds of D_KL(P_G || P_R) + D_KL(P_R || P_G).

    Per fold, one model is fit on the real training split and one on the
    generated training split; both probability vectors come from the same
    held-out mixed test set (equal parts real and generated).
    """
    kls = per_fold_symmetrized_kl(
        real_set, gen_set, kp, hp, folds, seed, real_vectors, gen_vectors
    )
    return _median(kls)


def per_fold_symmetrized_kl(
    real_set,
    gen_set,
    kp: KernelParams = KernelParams(),
    hp: Hyperparams = Hyperparams(),
    folds: int = 5,
    seed: int = 0,
    real_vectors=None,
    gen_vectors=None,
) -> List[float]:
    if folds < 2:
        raise ConfigError("folds must be >= 2")
    if len(real_set) < folds * 2 or len(gen_set) < folds * 2:
        raise EstimatorError(
            f"need at least {folds * 2} graphs per set for {folds}-fold KL"
        )
    rv = real_vectors if real_vectors is not None else [vectorize(g, kp) for g in real_set]
    gv = gen_vectors if gen_vectors is not None else [vectorize(g, kp) for g in gen_set]

    # both sides draw from identically-seeded streams so that equal sets get
    # equal splits, making KL(A, A) exactly zero
    rng_r = random.Random(derive_seed(seed, 101))
    rng_g = random.Random(derive_seed(seed, 101))
    real_folds = _fold_splits(len(rv), folds, rng_r)
    gen_folds = _fold_splits(len(gv), folds, rng_g)

    kls = []
    for f in range(folds):
        held_r = real_folds[f]
        held_g = gen_folds[f]
        train_r = [rv[i] for ff in range(folds) if ff != f for i in real_folds[ff]]
        train_g = [gv[i] for ff in range(folds) if ff != f for i in gen_folds[ff]]
        m = min(len(held_r), len(held_g))
        test = [rv[i] for i in held_r[:m]] + [gv[i] for i in held_g[:m]]
        model_r = fit(train_r, hp)
        model_g = fit(train_g, hp)
        p_r = probabilities_over(model_r, test)
        p_g = probabilities_over(model_g, test)
        kl = 0.0
        for pg, pr in zip(p_g, p_r):
            if pg == pr:
                continue  # zero contribution either way; keeps KL(A,A) exact
            kl += pg * math.log(pg / pr) + pr * math.log(pr / pg)
        kls.append(kl)
    return kls


# -- RNA validity filters ------------------------------------------------------


def chordless_cycles(g: LabeledGraph, limit: int = 100000) -> List[List[int]]:
    """All chordless (induced) cycles, each reported once.

    Cycles are grown from their minimum node with the second node smaller
    than the last to fix orientation; ``limit`` caps the search for safety.
    """
    cycles = []
    ids = g.node_ids()
    adj = {v: set(g.neighbors(v)) for v in ids}
    budget = [limit]

    def extend(path, blocked):
        if budget[0] <= 0:
            return
        budget[0] -= 1
        s = path[0]
        last = path[-1]
        for w in sorted(adj[last]):
            if w <= s or w in blocked:
                continue
            closes = w in adj[s]
            # chordless: w may touch no interior node except `last`
            if any(w in adj[p] for p in path[1:-1]):
                continue
            if closes:
                if len(path) >= 3 and path[1] < w:
                    cycles.append(path + [w])
                if len(path) == 2:
                    cycles.append(path + [w])
                continue
            extend(path + [w], blocked | {w})

    for s in ids:
        for v in sorted(adj[s]):
            if v <= s:
                continue
            extend([s, v], {s, v})
    # dedupe triangles reported from both orientations
    seen = set()
    unique = []
    for c in cycles:
        key = frozenset(c)
        if key in seen:
            continue
        seen.add(key)
        unique.append(c)
    return unique


def rna_validity_filters(g: LabeledGraph) -> Tuple[bool, List[str]]:
    """The four topological validity filters for RNA-like graphs.

    a) at most 2 nodes of degree 1; b) no node of degree > 3; c) connected;
    d) every chordless cycle must be anchored: a cycle whose nodes all have
    degree 2 is an isolated ring, and a cycle with exactly two degree-3
    nodes (rest degree 2) needs those two nodes adjacent.
    """
    reasons = []
    ids = g.node_ids()
    degrees = {v: g.degree(v) for v in ids}
    if sum(1 for d in degrees.values() if d == 1) > 2:
        reasons.append("a")
    if any(d > 3 for d in degrees.values()):
        reasons.append("b")
    from .graphs import is_connected

    if not is_connected(g):
        reasons.append("c")
    d_ok = True
    for cycle in chordless_cycles(g):
        degs = [degrees[v] for v in cycle]
        if any(d > 3 for d in degs):
            continue  # covered by filter b
        three = [v for v in cycle if degrees[v] == 3]
        if not three and all(d == 2 for d in degs):
            d_ok = False
            break
        if len(three) == 2 and all(degrees[v] in (2, 3) for v in cycle):
            u, w = three
            if not g.has_edge(u, w):
                d_ok = False
                break
    if not d_ok:
        reasons.append("d")
    return (not reasons, reasons)


def filter_pass_fraction(graphs: Sequence[LabeledGraph]) -> float:
    if not graphs:
        return 0.0
    passed = sum(1 for g in graphs if rna_validity_filters(g)[0])
    return passed / len(graphs)


# -- full report ----------------------------------------------------------------


def evaluate(
    real_set: Sequence[LabeledGraph],
    gen_set: Sequence[LabeledGraph],
    config: Optional[EvalConfig] = None,
) -> EvalReport:
    """Assemble every metric into one deterministic report."""
    cfg = config or EvalConfig()
    if not real_set or not gen_set:
        raise ConfigError("evaluate requires non-empty sets")
    rv = [vectorize(g, cfg.kernel) for g in real_set]
    gv = [vectorize(g, cfg.kernel) for g in gen_set]

    kl_per_fold = []
    kl_per_rep = []
    for rep in range(cfg.reps):
        rep_seed = derive_seed(cfg.seed, 7000 + rep)
        fold_kls = per_fold_symmetrized_kl(
            real_set,
            gen_set,
            cfg.kernel,
            cfg.hyper,
            cfg.folds,
            seed=rep_seed,
            real_vectors=rv,
            gen_vectors=gv,
        )
        kl_per_fold.append(tuple(fold_kls))
        kl_per_rep.append(_median(fold_kls))

    sim = set_similarity(gen_set, real_set, cfg.kernel)
    i1, i2 = internal_diversity(gen_set, cfg.kernel)
    r1, r2 = internal_diversity(real_set, cfg.kernel)
    return EvalReport(
        symmetrized_kl=_median(kl_per_rep),
        kl_per_rep=tuple(kl_per_rep),
        kl_per_fold=tuple(kl_per_fold),
        set_similarity=sim,
        intdiv1=i1,
        intdiv2=i2,
        real_intdiv1=r1,
        real_intdiv2=r2,
        filter_pass_fraction=filter_pass_fraction(gen_set),
        fold_count=cfg.folds,
    )
