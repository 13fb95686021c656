"""Sentence-embedding backend contract plus a deterministic reference encoder.

Embeddings are plain float64 numpy vectors. Every backend must emit
unit-norm vectors of its declared dimension, which reduces cosine distance
to ``1 - dot``. The reference encoder is a seeded hashed bag-of-tokens; it
exists so the whole pipeline runs offline and byte-reproducibly.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod

import numpy as np

from .errors import EncodeError
from .textproc import tokenize

Embedding = np.ndarray

_NORM_TOLERANCE = 1e-9


def stable_bucket(token: str, seed: int, buckets: int) -> int:
    """Map a token to a bucket index, stable across runs and platforms.

    Uses keyed BLAKE2b rather than the interpreter's randomized ``hash``.
    """
    key = seed.to_bytes(8, "little", signed=True)
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=key).digest()
    return int.from_bytes(digest, "little") % buckets


def l2_normalize(vector: np.ndarray) -> np.ndarray:
    """Scale to unit L2 norm; an all-zero vector is returned unchanged."""
    vec = np.asarray(vector, dtype=np.float64)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        return vec.copy()
    return vec / norm


class EncoderBackend(ABC):
    """Text-to-vector backend.

    Implementations must be deterministic for a fixed configuration and
    must always return unit-norm vectors of ``dimension`` entries. A backend
    that cannot take concurrent calls sets ``thread_safe = False`` and the
    pipeline serializes around it.
    """

    name: str
    dimension: int
    thread_safe: bool = True

    @abstractmethod
    def encode(self, text: str) -> Embedding:
        """Encode non-empty text into a unit-norm vector."""


class HashedBagEncoder(EncoderBackend):
    """Seeded hashed bag-of-tokens encoder, L2-normalized.

    Deterministic, dependency-free stand-in for a neural sentence encoder:
    token counts are accumulated into ``dimension`` buckets chosen by a
    keyed stable hash, then normalized to unit length.
    """

    name = "hashed"

    def __init__(self, dimension: int = 256, seed: int = 0):
        if dimension < 8:
            raise ValueError(f"encoder dimension must be >= 8, got {dimension}")
        self.dimension = int(dimension)
        self.seed = int(seed)

    def encode(self, text: str) -> Embedding:
        tokens = tokenize(text)
        if not tokens:
            raise EncodeError("cannot encode text with no tokens")
        counts = np.zeros(self.dimension, dtype=np.float64)
        for token in tokens:
            counts[stable_bucket(token, self.seed, self.dimension)] += 1.0
        return l2_normalize(counts)


def reference_encode(text: str, dimension: int = 256, seed: int = 0) -> Embedding:
    """Encode ``text`` with a hashed bag-of-tokens encoder built on the spot."""
    return HashedBagEncoder(dimension=dimension, seed=seed).encode(text)


def encode(backend: EncoderBackend, text: str) -> Embedding:
    """Encode ``text`` with ``backend`` and enforce the embedding contract.

    Raises EncodeError when the text has no tokens or when the backend
    returns a vector of the wrong shape, with non-finite entries, or with a
    norm off unit by more than 1e-9.
    """
    if not tokenize(text):
        raise EncodeError("text has no tokens to encode")
    vector = np.asarray(backend.encode(text), dtype=np.float64)
    if vector.shape != (backend.dimension,):
        raise EncodeError(
            f"backend {backend.name!r} returned shape {vector.shape}, "
            f"expected ({backend.dimension},)"
        )
    if not np.all(np.isfinite(vector)):
        raise EncodeError(f"backend {backend.name!r} returned non-finite entries")
    if abs(float(np.linalg.norm(vector)) - 1.0) > _NORM_TOLERANCE:
        raise EncodeError(f"backend {backend.name!r} returned a non-unit vector")
    return vector


def cosine_distance(a: Embedding, b: Embedding) -> float:
    """Return ``1 - dot(a, b)``, clamped to [0, 2] against rounding noise.

    Inputs are assumed unit-norm (the ``encode`` contract); under that
    assumption 0 means identical direction and 2 means antipodal.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"embedding dimension mismatch: {a.shape} vs {b.shape}")
    return min(2.0, max(0.0, 1.0 - float(np.dot(a, b))))
