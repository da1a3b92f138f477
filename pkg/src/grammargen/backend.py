"""Backend selection: compiled extension when available, pure Python otherwise.

The compiled core is preferred at import time. Set GRAMMARGEN_BACKEND=python
to force the fallback (used by the benchmark and parity tests), or
GRAMMARGEN_BACKEND=compiled to fail loudly when the extension is missing.
"""
import os

from . import _purepy

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None

_BACKENDS = {"python": _purepy}
if _speedups is not None:
    _BACKENDS["compiled"] = _speedups


def available_backends():
    return sorted(_BACKENDS)


def _select_default():
    forced = os.environ.get("GRAMMARGEN_BACKEND")
    if forced:
        if forced not in _BACKENDS:
            raise ImportError(
                f"GRAMMARGEN_BACKEND={forced!r} requested but only "
                f"{available_backends()} available"
            )
        return _BACKENDS[forced]
    return _BACKENDS.get("compiled", _purepy)


_active = _select_default()


def get_backend(name=None):
    """Return a backend module by name, or the active one."""
    if name is None:
        return _active
    return _BACKENDS[name]


def use_backend(name):
    """Switch the active backend; returns the previous one's name."""
    global _active
    prev = _active.NAME
    _active = _BACKENDS[name]
    return prev


def backend_name():
    return _active.NAME


def fold_pairs(codes, minloop, wobble):
    return _active.fold_pairs(codes, minloop, wobble)


def bounded_distances(indptr, indices, cap):
    return _active.bounded_distances(indptr, indices, cap)


def wl_hashes(init, indptr, indices, arc_hash, rounds):
    return _active.wl_hashes(init, indptr, indices, arc_hash, rounds)
