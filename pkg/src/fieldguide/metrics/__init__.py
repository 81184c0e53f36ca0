from .bleu import CorpusBleu, bleu, brevity_penalty, clipped_matches, closest_ref_length, ngram_counts
from .evaluate import MetricReport, evaluate_model
from .meteor import meteor, minimal_chunks

__all__ = [
    "CorpusBleu",
    "MetricReport",
    "bleu",
    "brevity_penalty",
    "clipped_matches",
    "closest_ref_length",
    "evaluate_model",
    "meteor",
    "minimal_chunks",
    "ngram_counts",
]
