from .encoders import HashingSentenceEncoder, TransformerSentenceEncoder, embed_text, load_sentence_encoder
from .similarity import cosine_similarity, extract_keywords
from .stopwords import STOPWORDS

__all__ = [
    "HashingSentenceEncoder",
    "TransformerSentenceEncoder",
    "STOPWORDS",
    "cosine_similarity",
    "embed_text",
    "extract_keywords",
    "load_sentence_encoder",
]
