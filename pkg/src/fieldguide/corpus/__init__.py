from .images import apply_augment, augment, center_crop_window, load_image, preprocess_image
from .records import CaptionedImage, Category, IngestResult, RowError, ingest_dataset
from .synth import generate_corpus
from .vocab import (
    END_ID,
    END_TOKEN,
    MAX_CAPTION_IDS,
    PAD_ID,
    PAD_TOKEN,
    START_ID,
    START_TOKEN,
    UNK_ID,
    UNK_TOKEN,
    Vocabulary,
    build_vocabulary,
    detokenize,
    normalize_words,
    tokenize,
)

__all__ = [
    "CaptionedImage",
    "Category",
    "IngestResult",
    "RowError",
    "Vocabulary",
    "apply_augment",
    "augment",
    "build_vocabulary",
    "center_crop_window",
    "detokenize",
    "generate_corpus",
    "ingest_dataset",
    "load_image",
    "normalize_words",
    "preprocess_image",
    "tokenize",
    "END_ID",
    "END_TOKEN",
    "MAX_CAPTION_IDS",
    "PAD_ID",
    "PAD_TOKEN",
    "START_ID",
    "START_TOKEN",
    "UNK_ID",
    "UNK_TOKEN",
]
