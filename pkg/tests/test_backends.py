"""Parity between the pure-Python kernels and the compiled extension."""
import random

import numpy as np
import pytest

from grammargen import backend

pure = backend.get_backend("python")
compiled = (
    backend.get_backend("compiled")
    if "compiled" in backend.available_backends()
    else None
)

needs_compiled = pytest.mark.skipif(
    compiled is None, reason="compiled extension not built"
)


def _random_csr(rng, n):
    adj = {i: set() for i in range(n)}
    for _ in range(rng.randint(0, 3 * n)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    indptr = np.zeros(n + 1, dtype=np.int32)
    indices = []
    arc_hash = []
    for i in range(n):
        for j in sorted(adj[i]):
            indices.append(j)
            arc_hash.append(rng.getrandbits(63))
        indptr[i + 1] = len(indices)
    return indptr, np.array(indices, dtype=np.int32), np.array(arc_hash, dtype=np.uint64)


@needs_compiled
def test_fold_pairs_parity():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 20)
        codes = np.array([rng.randrange(4) for _ in range(n)], dtype=np.uint8)
        for wobble in (False, True):
            a = pure.fold_pairs(codes, 3, wobble)
            b = compiled.fold_pairs(codes, 3, wobble)
            assert np.array_equal(a, b), codes


@needs_compiled
def test_bounded_distances_parity():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(1, 15)
        indptr, indices, _ = _random_csr(rng, n)
        for cap in (0, 1, 3, 7):
            a = pure.bounded_distances(indptr, indices, cap)
            b = compiled.bounded_distances(indptr, indices, cap)
            assert np.array_equal(a, b)


@needs_compiled
def test_wl_hashes_parity():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 15)
        indptr, indices, arc_hash = _random_csr(rng, n)
        init = np.array([rng.getrandbits(63) for _ in range(n)], dtype=np.uint64)
        for rounds in (0, 1, 3, n):
            a = pure.wl_hashes(init, indptr, indices, arc_hash, rounds)
            b = compiled.wl_hashes(init, indptr, indices, arc_hash, rounds)
            assert np.array_equal(a, b)


def test_backend_switch_roundtrip():
    active = backend.backend_name()
    prev = backend.use_backend("python")
    assert backend.backend_name() == "python"
    backend.use_backend(prev)
    assert backend.backend_name() == active


@needs_compiled
def test_certificates_identical_across_backends():
    from grammargen.certs import certificate

    from conftest import random_graphs

    graphs = random_graphs(20, seed=13, n_min=2, n_max=12)
    prev = backend.use_backend("python")
    try:
        pure_certs = [certificate(g) for g in graphs]
    finally:
        backend.use_backend("compiled")
    comp_certs = [certificate(g) for g in graphs]
    backend.use_backend(prev)
    assert pure_certs == comp_certs
