"""64-bit hashing primitives shared by both backends.

Everything here is defined over unsigned 64-bit integers with explicit
masking so that the pure-Python and compiled kernels produce bit-identical
values on every platform.
"""

MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
GOLDEN = 0x9E3779B97F4A7C15


def fnv1a_bytes(data: bytes, h: int = FNV_OFFSET) -> int:
    """FNV-1a over a byte string, continuing from state ``h``."""
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & MASK64
    return h


def fnv1a_u64(h: int, x: int) -> int:
    """Fold one unsigned 64-bit value into the FNV state, little-endian."""
    for _ in range(8):
        h = ((h ^ (x & 0xFF)) * FNV_PRIME) & MASK64
        x >>= 8
    return h


def mix64(x: int) -> int:
    """splitmix64 finalizer; bijective avalanche mix of a 64-bit value."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def derive_seed(seed: int, *salts: int) -> int:
    """Derive an independent 64-bit stream seed from a base seed and salts."""
    h = mix64((seed & MASK64) ^ GOLDEN)
    for s in salts:
        h = mix64((h + GOLDEN + (s & MASK64)) & MASK64)
    return h
