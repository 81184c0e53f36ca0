"""The assessment pipeline: screenshot + learner caption -> scored feedback."""

import time

import numpy as np

from ..captioner.model import CaptionerModel, decode_beam
from ..corpus.images import preprocess_image
from ..corpus.vocab import detokenize
from ..feedback import AssessmentConfig, generate_feedback
from ..semantics import cosine_similarity, embed_text, extract_keywords
from .types import AssessmentResult, Observation


def assess_observation(
    obs: Observation,
    image: np.ndarray,
    model: CaptionerModel,
    encoder,
    cfg: AssessmentConfig = None,
    store=None,
) -> AssessmentResult:
    """Caption the learner's view, compare captions, render feedback.

    `image` is the raw decoded RGB array. When a store is given the result
    is persisted to the observation's session before returning.
    """
    cfg = cfg or AssessmentConfig()
    obs.validate()
    t0 = time.perf_counter()

    tensor = preprocess_image(image)
    grid = model.encode_image(tensor)
    tokens, _ = decode_beam(model, grid, cfg.beam_width)
    generated = detokenize(tokens, model.vocab)
    if not generated:
        generated = "<no caption>"
        score = 0.0
        keywords = obs.caption.split()[: cfg.lambda_keywords]
    else:
        keywords = extract_keywords(encoder, generated, cfg.lambda_keywords)
        score = cosine_similarity(embed_text(encoder, obs.caption), embed_text(encoder, generated))
    fb = generate_feedback(score, keywords, cfg)

    latency_ms = int((time.perf_counter() - t0) * 1000)
    result = AssessmentResult(
        observation_id=obs.id,
        generated_caption=generated,
        score=score,
        keywords=list(keywords),
        verdict=fb.verdict.value,
        feedback_text=fb.text,
        encoder_identity=encoder.identity,
        latency_ms=latency_ms,
    )
    if store is not None:
        from PIL import Image
        import io

        buf = io.BytesIO()
        Image.fromarray(np.asarray(image)).save(buf, format="PNG")
        store.add_result(obs.session_id, obs, result, buf.getvalue())
    return result
