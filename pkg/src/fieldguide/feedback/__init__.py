"""Thresholded templated feedback.

The two message templates are fixed strings; keyword substitution is the
only variation. A score at or above the threshold passes.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import isfinite

PASS_TEMPLATE = "Excellent work, you noticed the {keywords} here!"
RETRY_TEMPLATE = "Try again! Did you notice the {keywords}?"


class Verdict(Enum):
    PASS = "Pass"
    RETRY = "Retry"


@dataclass
class AssessmentConfig:
    gamma_threshold: float = 0.5
    lambda_keywords: int = 2
    beam_width: int = 3

    def __post_init__(self):
        if not 0.0 <= self.gamma_threshold <= 1.0:
            raise ValueError(f"gamma_threshold must be in [0,1], got {self.gamma_threshold}")
        if self.lambda_keywords < 1:
            raise ValueError(f"lambda_keywords must be >= 1, got {self.lambda_keywords}")
        if self.beam_width < 1:
            raise ValueError(f"beam_width must be >= 1, got {self.beam_width}")


@dataclass
class Feedback:
    verdict: Verdict
    text: str
    score: float
    keywords: list = field(default_factory=list)


def join_keywords(keywords: list[str]) -> str:
    """Natural-language conjunction: "x", "x and y", "x, y, and z"."""
    if len(keywords) == 1:
        return keywords[0]
    if len(keywords) == 2:
        return f"{keywords[0]} and {keywords[1]}"
    return ", ".join(keywords[:-1]) + f", and {keywords[-1]}"


def generate_feedback(score: float, keywords: list[str], cfg: AssessmentConfig = None) -> Feedback:
    """Render the pass/retry message for a similarity score."""
    cfg = cfg or AssessmentConfig()
    if not keywords:
        raise ValueError("keywords must be non-empty")
    if not isfinite(score):
        raise ValueError(f"score must be finite, got {score}")
    joined = join_keywords(list(keywords))
    if score >= cfg.gamma_threshold:
        return Feedback(Verdict.PASS, PASS_TEMPLATE.format(keywords=joined), score, list(keywords))
    return Feedback(Verdict.RETRY, RETRY_TEMPLATE.format(keywords=joined), score, list(keywords))
