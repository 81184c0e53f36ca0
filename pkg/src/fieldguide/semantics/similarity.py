"""Cosine similarity and embedding-ranked keyword extraction."""

import numpy as np

from ..corpus.vocab import normalize_words
from .encoders import embed_text
from .stopwords import STOPWORDS

# scores within 1e-12 are treated as tied so ulp noise cannot flip a
# deterministic caption-position tie-break
_SCORE_QUANTUM = 1e-12


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(a @ b / (na * nb))


def extract_keywords(encoder, caption: str, lambda_k: int = 2) -> list[str]:
    """Top-lambda_k caption tokens by similarity to the whole caption.

    Candidates are the caption's content tokens (stopwords out, duplicates
    merged); ranking ties break toward earlier caption position. If every
    token is a stopword, the first tokens are returned as-is.
    """
    if lambda_k < 1:
        raise ValueError(f"lambda_k must be >= 1, got {lambda_k}")
    words = normalize_words(caption)
    if not words:
        raise ValueError(f"caption normalizes to nothing: {caption!r}")

    candidates = []
    seen = set()
    for pos, w in enumerate(words):
        if w in STOPWORDS or w in seen:
            continue
        seen.add(w)
        candidates.append((pos, w))
    if not candidates:
        return words[:lambda_k]

    caption_vec = embed_text(encoder, caption)
    ranked = sorted(
        candidates,
        key=lambda pw: (-round(cosine_similarity(embed_text(encoder, pw[1]), caption_vec) / _SCORE_QUANTUM), pw[0]),
    )
    return [w for _, w in ranked[:lambda_k]]
