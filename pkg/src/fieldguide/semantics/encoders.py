"""Sentence encoders behind a common contract.

Production uses a pretrained transformer sentence encoder loaded from a
local artifact directory. Tests and offline runs use a deterministic
bag-of-words hashing stub so nothing is downloaded. Both return unit-norm
vectors and identify themselves for result provenance.
"""

import hashlib

import numpy as np

from ..corpus.vocab import normalize_words


class HashingSentenceEncoder:
    """Deterministic stub: sum of per-token hash-seeded gaussian vectors.

    Order-invariant by construction (a bag of words) and stable across
    platforms/processes since token vectors derive from blake2b digests.
    """

    def __init__(self, dimension: int = 256):
        self.dimension = dimension
        self.identity = f"hashing-bow-v1-d{dimension}"
        self._token_cache = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._token_cache.get(token)
        if vec is None:
            seed = int.from_bytes(hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "big")
            vec = np.random.default_rng(seed).standard_normal(self.dimension)
            vec /= np.linalg.norm(vec)
            self._token_cache[token] = vec
        return vec

    def embed(self, text: str) -> np.ndarray:
        words = normalize_words(text)
        if not words:
            raise ValueError(f"cannot embed text that normalizes to nothing: {text!r}")
        total = np.zeros(self.dimension)
        for w in words:
            total += self._token_vector(w)
        norm = np.linalg.norm(total)
        if norm == 0.0:  # opposing hash vectors; nudge deterministically
            return self._token_vector(words[0])
        return total / norm


class TransformerSentenceEncoder:
    """Pretrained sentence-transformer loaded from a local artifact path."""

    def __init__(self, artifact_path: str):
        from sentence_transformers import SentenceTransformer  # heavyweight, optional

        self._model = SentenceTransformer(str(artifact_path))
        self.dimension = self._model.get_sentence_embedding_dimension()
        name = str(artifact_path).rstrip("/").rsplit("/", 1)[-1]
        self.identity = f"sentence-transformer:{name}"

    def embed(self, text: str) -> np.ndarray:
        if not text.strip():
            raise ValueError("cannot embed empty text")
        vec = self._model.encode(text, convert_to_numpy=True)
        vec = np.asarray(vec, dtype=np.float64)
        return vec / np.linalg.norm(vec)


def load_sentence_encoder(spec: str):
    """Encoder factory: ``hashing[:dim]`` for the stub, anything else is a
    sentence-transformer artifact path."""
    if spec == "hashing" or spec.startswith("hashing:"):
        dim = int(spec.split(":", 1)[1]) if ":" in spec else 256
        return HashingSentenceEncoder(dim)
    return TransformerSentenceEncoder(spec)


def embed_text(encoder, text: str) -> np.ndarray:
    """Embed text to a unit-norm vector; empty text is an error."""
    if not text or not text.strip():
        raise ValueError("cannot embed empty text")
    vec = np.asarray(encoder.embed(text), dtype=np.float64)
    if vec.shape != (encoder.dimension,):
        raise ValueError(f"encoder returned shape {vec.shape}, expected ({encoder.dimension},)")
    if not np.all(np.isfinite(vec)):
        raise ValueError("encoder returned non-finite values")
    return vec / np.linalg.norm(vec)
