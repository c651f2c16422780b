"""Small numerical helpers shared across the package."""

from __future__ import annotations

import math

import numpy as np

# Chunk length for partial sums.  Pairwise summation inside a chunk keeps the
# per-chunk error at ~log2(CHUNK)*eps; the chunk partials are then combined
# exactly with math.fsum, so the overall error does not grow with array size.
_CHUNK = 1 << 16


def csum(values) -> float:
    """Compensated sum of a 1-d float array.

    Deterministic for a given input regardless of how the caller chunks its
    work: partials are taken over fixed-size blocks and combined exactly.
    """
    a = np.asarray(values, dtype=np.float64).ravel()
    if a.size == 0:
        return 0.0
    partials = np.add.reduceat(a, np.arange(0, a.size, _CHUNK))
    return float(math.fsum(partials))


def cdot(weights, values) -> float:
    """Compensated dot product of two 1-d float arrays of equal length."""
    w = np.asarray(weights, dtype=np.float64).ravel()
    v = np.asarray(values, dtype=np.float64).ravel()
    if w.shape != v.shape:
        raise ValueError(f"length mismatch: {w.shape} vs {v.shape}")
    partials = [float(np.dot(w[i:i + _CHUNK], v[i:i + _CHUNK]))
                for i in range(0, w.size, _CHUNK)]
    return float(math.fsum(partials))


def double_factorial(k: int) -> int:
    """k!! as an exact integer; (-1)!! = 0!! = 1."""
    if k < -1:
        raise ValueError(f"double factorial undefined for {k}")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out
