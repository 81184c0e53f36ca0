"""Vocabulary building and caption tokenization.

Normalization is deliberately minimal: lowercase, punctuation acts as a
token boundary, whitespace split. Special tokens:

    <pad>   = 0   padding for fixed-length batches
    <start> = 1   beginning of caption
    <end>   = 2   end of caption
    <unk>   = 3   out-of-vocabulary word
"""

import re
from collections import Counter

from ..errors import TokenizeError

PAD_TOKEN = "<pad>"
START_TOKEN = "<start>"
END_TOKEN = "<end>"
UNK_TOKEN = "<unk>"
SPECIAL_TOKENS = (PAD_TOKEN, START_TOKEN, END_TOKEN, UNK_TOKEN)

PAD_ID, START_ID, END_ID, UNK_ID = 0, 1, 2, 3

# captions are capped at 30 ids including <start>/<end>
MAX_CAPTION_IDS = 30
MAX_CONTENT_TOKENS = MAX_CAPTION_IDS - 2

_NON_WORD = re.compile(r"[^a-z0-9]+")


def normalize_words(text: str) -> list[str]:
    """Lowercase, strip punctuation to boundaries, split on whitespace."""
    return [w for w in _NON_WORD.split(text.lower()) if w]


class Vocabulary:
    """Bijective token<->id map with the four reserved specials at ids 0-3."""

    def __init__(self, tokens: list[str], min_freq: int = 1):
        self.min_freq = min_freq
        self.id_to_token = list(SPECIAL_TOKENS) + list(tokens)
        self.token_to_id = {t: i for i, t in enumerate(self.id_to_token)}
        if len(self.token_to_id) != len(self.id_to_token):
            raise ValueError("duplicate tokens in vocabulary")

    def __len__(self):
        return len(self.id_to_token)

    def __contains__(self, token):
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, UNK_ID)

    def to_dict(self) -> dict:
        return {"tokens": self.id_to_token[len(SPECIAL_TOKENS) :], "min_freq": self.min_freq}

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        return cls(list(d["tokens"]), int(d.get("min_freq", 1)))


def build_vocabulary(dataset, min_freq: int = 1) -> Vocabulary:
    """Build a vocabulary from CaptionedImage records (or raw caption strings).

    Every token appearing at least ``min_freq`` times gets an id; ties are
    broken by first appearance, so the build is deterministic.
    """
    if not dataset:
        raise ValueError("cannot build a vocabulary from an empty dataset")
    if min_freq < 1:
        raise ValueError(f"min_freq must be >= 1, got {min_freq}")
    counts = Counter()
    first_seen = {}
    for record in dataset:
        caption = record if isinstance(record, str) else record.caption
        for word in normalize_words(caption):
            if word not in first_seen:
                first_seen[word] = len(first_seen)
            counts[word] += 1
    kept = sorted((w for w, n in counts.items() if n >= min_freq), key=first_seen.__getitem__)
    return Vocabulary(kept, min_freq)


def tokenize(text: str, vocab: Vocabulary) -> list[int]:
    """Map text to ids wrapped as <start> ... <end>; OOV words become <unk>."""
    words = normalize_words(text)
    if not words:
        raise TokenizeError(f"text is empty after normalization: {text!r}")
    return [START_ID] + [vocab.id_of(w) for w in words] + [END_ID]


def detokenize(ids, vocab: Vocabulary) -> str:
    """Inverse of tokenize on in-vocabulary text: the normalized token string."""
    words = []
    for i in ids:
        token = vocab.id_to_token[i]
        if token in SPECIAL_TOKENS and token != UNK_TOKEN:
            continue
        words.append(token)
    return " ".join(words)
