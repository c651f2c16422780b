"""Synthetic homodyne quadrature data for phase-diffused squeezed vacuum.

Draws are counter-based (Philox-4x64) so that a dataset is a pure function
of (model, theta, n, seed): chunked generation, resumption, and threading
all reproduce the identical sample array bit for bit.

Stream layout for a given 64-bit seed:

* key = [seed mod 2**64, stream]
* stream 0 carries the sampling words; sample j owns words 2j (phase) and
  2j + 1 (quadrature), so chunks that start at even word offsets can be
  generated independently via counter jumps (4 words per counter block).
* streams 2**63 + r are reserved for bootstrap replicate r (see the
  resampling helpers in the analysis modules).

Raw 64-bit words map to open-interval uniforms via ((w >> 12) + 0.5) * 2**-52,
which never yields 0 or 1, so inverse-CDF transforms stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .states import PhaseNoise, StateModel, quadrature_variance

__all__ = [
    "SAMPLE_STREAM",
    "BOOTSTRAP_STREAM_BASE",
    "DatasetMeta",
    "QuadratureDataset",
    "raw_words",
    "uniform_open",
    "phase_from_uniform",
    "sample_phase",
    "sample_quadratures",
    "bootstrap_counts",
]

SAMPLE_STREAM = 0
BOOTSTRAP_STREAM_BASE = 1 << 63

_WORDS_PER_BLOCK = 4  # Philox-4x64 emits 4 words per counter increment
_DEFAULT_CHUNK = 1 << 22


def raw_words(seed, stream, start, count):
    """Raw 64-bit words [start, start + count) of one Philox substream.

    start must be a multiple of 4 so the position is reachable by counter
    jumps alone; callers arrange their layouts accordingly.
    """
    if start % _WORDS_PER_BLOCK:
        raise ValueError("word offset must be a multiple of 4")
    if count < 0:
        raise ValueError("count must be nonnegative")
    key = np.array([int(seed) % (1 << 64), int(stream) % (1 << 64)], dtype=np.uint64)
    bits = np.random.Philox(key=key)
    if start:
        bits.advance(start // _WORDS_PER_BLOCK)
    return bits.random_raw(count)


def uniform_open(words):
    """Map raw 64-bit words to float64 uniforms strictly inside (0, 1)."""
    w = np.asarray(words, dtype=np.uint64)
    return ((w >> np.uint64(12)) + 0.5) * 2.0**-52


def phase_from_uniform(noise, u):
    """Deterministic inverse-CDF transform from uniforms to phase draws.

    delta noise ignores u and returns zeros, so a sample consumes the same
    number of random words under every noise law.
    """
    u = np.asarray(u, dtype=np.float64)
    if noise.kind == "delta" or (noise.kind == "gaussian" and noise.sigma == 0.0):
        return np.zeros_like(u)
    if noise.kind == "gaussian":
        return noise.sigma * ndtri(u)
    if noise.kind == "uniform":
        return np.pi * u
    raise ValueError(f"unknown noise kind {noise.kind!r}")


def sample_phase(noise, seed, n, stream=SAMPLE_STREAM):
    """Draw n phase offsets from the noise law on the given substream.

    Uses the same per-sample word layout as sample_quadratures (phase word
    first), so the j-th phase here equals the j-th phase consumed there.
    """
    if not isinstance(noise, PhaseNoise):
        raise TypeError("noise must be a PhaseNoise")
    n = _checked_count(n)
    words = raw_words(seed, stream, 0, 2 * n)
    return phase_from_uniform(noise, uniform_open(words[0::2]))


def _checked_count(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError("sample count must be an integer")
    n = int(n)
    if n < 1:
        raise ValueError("sample count must be positive")
    return n


@dataclass(frozen=True)
class DatasetMeta:
    """Provenance carried alongside a sample array."""

    model: dict | None
    seed: int | None
    n: int
    created: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("meta sample count must be positive")
        if self.model is not None and not isinstance(self.model, dict):
            raise TypeError("model metadata must be a dict or None")

    def to_dict(self):
        return {
            "model": self.model,
            "seed": self.seed,
            "n": self.n,
            "created": self.created,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(model=d["model"], seed=d["seed"], n=d["n"], created=d["created"])


@dataclass(frozen=True)
class QuadratureDataset:
    """Homodyne samples of one quadrature angle plus their provenance.

    samples is locked read-only; analyses share it without copies.
    """

    samples: np.ndarray
    theta: float
    meta: DatasetMeta

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a nonempty 1-d array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.meta.n != samples.size:
            raise ValueError("meta sample count disagrees with the array")
        theta = float(self.theta)
        if not np.isfinite(theta):
            raise ValueError("theta must be finite")
        samples = samples.copy() if samples is self.samples else samples
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "theta", theta)

    @property
    def n(self):
        return self.samples.size


def bootstrap_counts(seed, replicate, n):
    """Multiplicity of each sample index in bootstrap replicate r.

    Resamples n indices with replacement on substream 2**63 + r and returns
    float64 counts of length n summing exactly to n.  Depends only on
    (seed, replicate, n), never on how replicates are scheduled.
    """
    n = _checked_count(n)
    replicate = int(replicate)
    if replicate < 0:
        raise ValueError("replicate index must be nonnegative")
    u = uniform_open(raw_words(seed, BOOTSTRAP_STREAM_BASE + replicate, 0, n))
    idx = (u * n).astype(np.int64)  # u < 1 keeps idx in range
    return np.bincount(idx, minlength=n).astype(np.float64)


def sample_quadratures(model, theta, n, seed, chunk_size=_DEFAULT_CHUNK):
    """Generate n quadrature samples at analysis angle theta.

    Sample j: phase phi_j from the model's noise law, then
    x_j = sqrt(V(theta - phi_j)) * z_j with z_j standard normal.  Output is
    independent of chunk_size (chunks start on counter-block boundaries).
    """
    if not isinstance(model, StateModel):
        raise TypeError("model must be a StateModel")
    n = _checked_count(n)
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    chunk_size = int(chunk_size)
    if chunk_size < 2 or chunk_size % 2:
        raise ValueError("chunk_size must be a positive even integer")
    out = np.empty(n, dtype=np.float64)
    for start in range(0, n, chunk_size):
        count = min(chunk_size, n - start)
        words = raw_words(seed, SAMPLE_STREAM, 2 * start, 2 * count)
        u = uniform_open(words)
        phi = phase_from_uniform(model.noise, u[0::2])
        z = ndtri(u[1::2])
        out[start:start + count] = np.sqrt(
            quadrature_variance(model.params, theta - phi)
        ) * z
    meta = DatasetMeta(model=model.to_dict(), seed=int(seed), n=n)
    return QuadratureDataset(samples=out, theta=theta, meta=meta)
