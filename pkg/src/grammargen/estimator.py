"""Linear one-class model over hashed feature vectors.

Trained by seeded stochastic subgradient descent on the primal one-class
objective 0.5*||w||^2 + (1/(nu*n)) * sum max(0, rho - w.x_i) - rho.
Scores are squashed through the logistic so Metropolis ratios stay positive;
test-set probabilities come from a softmax over decision values.
"""
from __future__ import annotations

import math
import random
import struct
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .errors import EstimatorError
from .kernel import SparseVector

_MAGIC = b"GGOC"
_VERSION = 1


@dataclass(frozen=True)
class Hyperparams:
    nu: float = 0.5
    epochs: int = 20
    eta0: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.nu <= 1:
            raise EstimatorError("nu must lie in (0, 1]")
        if self.epochs < 1:
            raise EstimatorError("epochs must be >= 1")


@dataclass
class OneClassModel:
    weights: dict  # feature index -> weight
    rho: float
    hyper: Hyperparams
    loss_per_epoch: List[float] = field(default_factory=list, compare=False)

    def decision(self, x: SparseVector) -> float:
        w = self.weights
        return sum(v * w[i] for i, v in x.entries.items() if i in w) - self.rho


def fit(data: Sequence[SparseVector], hp: Hyperparams = Hyperparams()) -> OneClassModel:
    """Seeded SGD on the one-class primal; deterministic given hp.seed."""
    if len(data) < 2:
        raise EstimatorError("fit requires at least 2 vectors")
    for x in data:
        for i, v in x.entries.items():
            if not math.isfinite(v):
                raise EstimatorError(f"non-finite input value at feature {i}")

    n = len(data)
    inv_nu = 1.0 / hp.nu
    rng = random.Random(hp.seed)
    # scaled sparse weights: w = scale * acc, with acc_sq = sum(acc[i]^2)
    scale = 1.0
    acc: dict = {}
    acc_sq = 0.0
    rho = 0.0
    t = 0
    order = list(range(n))
    losses = []
    for _ in range(hp.epochs):
        rng.shuffle(order)
        epoch_loss = 0.0
        for idx in order:
            x = data[idx].entries
            eta = min(hp.eta0 / math.sqrt(t + 1), 0.9)
            t += 1
            wx = scale * sum(v * acc.get(i, 0.0) for i, v in x.items())
            hinge = max(0.0, rho - wx)
            epoch_loss += 0.5 * scale * scale * acc_sq + inv_nu * hinge - rho
            # regularization decay, then hinge subgradient
            scale *= 1.0 - eta
            if scale < 1e-12:
                for i in list(acc):
                    acc[i] *= scale
                acc_sq *= scale * scale
                scale = 1.0
            if hinge > 0.0:
                coef = eta * inv_nu / scale
                for i, v in x.items():
                    old = acc.get(i, 0.0)
                    delta = coef * v
                    acc[i] = old + delta
                    acc_sq += delta * (2.0 * old + delta)
                rho += eta * (1.0 - inv_nu)
            else:
                rho += eta
        losses.append(epoch_loss / n)
    weights = {i: scale * v for i, v in acc.items() if scale * v != 0.0}
    model = OneClassModel(weights=weights, rho=rho, hyper=hp)
    model.loss_per_epoch = losses
    return model


def score(m: OneClassModel, x: SparseVector) -> float:
    """Logistic of the decision value; strictly inside (0, 1)."""
    d = m.decision(x)
    if d >= 0:
        return 1.0 / (1.0 + math.exp(-d))
    e = math.exp(d)
    return e / (1.0 + e)


def probabilities_over(m: OneClassModel, test: Sequence[SparseVector]) -> List[float]:
    """Softmax over the decision values of a test set (temperature 1)."""
    if not test:
        raise EstimatorError("probabilities_over requires a non-empty test set")
    ds = [m.decision(x) for x in test]
    top = max(ds)
    exps = [math.exp(d - top) for d in ds]
    z = sum(exps)
    return [e / z for e in exps]


# -- binary serialization -----------------------------------------------------


def save_model(m: OneClassModel, path) -> None:
    entries = sorted(m.weights.items())
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(
            struct.pack(
                "<IdIdQdQ",
                _VERSION,
                m.hyper.nu,
                m.hyper.epochs,
                m.hyper.eta0,
                m.hyper.seed,
                m.rho,
                len(entries),
            )
        )
        for i, w in entries:
            fh.write(struct.pack("<Id", i, w))


def load_model(path) -> OneClassModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != _MAGIC:
        raise EstimatorError(f"{path}: not a grammargen model file")
    header = struct.calcsize("<IdIdQdQ")
    version, nu, epochs, eta0, seed, rho, count = struct.unpack(
        "<IdIdQdQ", blob[4 : 4 + header]
    )
    if version != _VERSION:
        raise EstimatorError(f"{path}: unsupported model version {version}")
    weights = {}
    off = 4 + header
    size = struct.calcsize("<Id")
    for _ in range(count):
        i, w = struct.unpack("<Id", blob[off : off + size])
        weights[i] = w
        off += size
    return OneClassModel(
        weights=weights,
        rho=rho,
        hyper=Hyperparams(nu=nu, epochs=epochs, eta0=eta0, seed=seed),
    )
