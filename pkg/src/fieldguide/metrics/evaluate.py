"""Corpus evaluation harness: BLEU-1..4 (corpus-aggregated) + mean METEOR."""

import logging
from dataclasses import dataclass, field

from ..captioner.model import CaptionerModel, decode_beam
from ..corpus.images import load_image, preprocess_image
from ..corpus.vocab import detokenize, normalize_words
from ..feedback import AssessmentConfig
from .bleu import CorpusBleu
from .meteor import meteor

log = logging.getLogger(__name__)


@dataclass
class MetricReport:
    bleu_1: float
    bleu_2: float
    bleu_3: float
    bleu_4: float
    meteor: float
    corpus_size: int
    per_item: list | None = None
    excluded: int = 0
    errors: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "bleu_1": self.bleu_1,
            "bleu_2": self.bleu_2,
            "bleu_3": self.bleu_3,
            "bleu_4": self.bleu_4,
            "meteor": self.meteor,
            "corpus_size": self.corpus_size,
        }


def evaluate_model(model: CaptionerModel, dataset, cfg: AssessmentConfig = None, per_item: bool = True) -> MetricReport:
    """Caption every image with beam search and score against the dataset captions.

    Undecodable images are excluded and counted, not fatal. Deterministic
    for a fixed model and dataset.
    """
    cfg = cfg or AssessmentConfig()
    if not dataset:
        raise ValueError("cannot evaluate on an empty dataset")

    corpus = CorpusBleu()
    meteor_scores = []
    errors = []
    for rec in dataset:
        try:
            img = preprocess_image(load_image(rec.image_ref))
        except (OSError, ValueError) as exc:
            errors.append(f"{rec.image_ref}: {exc}")
            log.warning("excluding %s: %s", rec.image_ref, exc)
            continue
        grid = model.encode_image(img)
        tokens, _ = decode_beam(model, grid, cfg.beam_width)
        hyp = detokenize(tokens, model.vocab).split()
        ref = normalize_words(rec.caption)
        corpus.add(hyp, [ref])
        meteor_scores.append(meteor(hyp, [ref]) if hyp else 0.0)

    if not meteor_scores:
        raise ValueError(f"no evaluable items (all {len(errors)} failed to decode)")

    return MetricReport(
        bleu_1=corpus.score(1),
        bleu_2=corpus.score(2),
        bleu_3=corpus.score(3),
        bleu_4=corpus.score(4),
        meteor=sum(meteor_scores) / len(meteor_scores),
        corpus_size=len(meteor_scores),
        per_item=meteor_scores if per_item else None,
        excluded=len(errors),
        errors=errors,
    )
