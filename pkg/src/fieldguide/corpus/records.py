"""Dataset ingestion from a CSV manifest.

Manifest format: UTF-8, header ``image_file,caption,category``, one row per
datapoint, image paths relative to the dataset root. Bad rows are collected
as row-level errors instead of aborting the whole ingest.
"""

import csv
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from PIL import Image, UnidentifiedImageError

from ..errors import DatasetError
from .vocab import MAX_CONTENT_TOKENS, normalize_words

log = logging.getLogger(__name__)


class Category(Enum):
    FACTUAL = "Factual"
    DESCRIPTIVE = "Descriptive"
    COMPARATIVE = "Comparative"
    ANALOGY = "Analogy"
    INFERENCE = "Inference"


@dataclass
class CaptionedImage:
    image_ref: Path
    caption: str
    category: Category | None = None


@dataclass
class RowError:
    row: int  # 1-based data row number in the manifest
    path: str
    reason: str

    def __str__(self):
        return f"row {self.row} ({self.path}): {self.reason}"


@dataclass
class IngestResult:
    records: list[CaptionedImage]
    errors: list[RowError]
    warnings: list[str]


def _decodable(path: Path) -> str | None:
    """Return None if the image decodes to RGB, else the failure reason."""
    try:
        with Image.open(path) as img:
            img.load()
            if img.width < 1 or img.height < 1:
                return "image has zero size"
    except UnidentifiedImageError:
        return "file is not a decodable image"
    except OSError as exc:
        return f"image decode failed: {exc}"
    return None


def ingest_dataset(root, manifest) -> IngestResult:
    """Read a manifest into CaptionedImage records, in row order.

    Raises DatasetError if the manifest is missing, malformed, or has no
    data rows; per-row problems (missing file, undecodable image, empty
    caption, unknown category) become RowError entries instead.
    """
    root = Path(root)
    manifest = Path(manifest)
    if not manifest.is_file():
        raise DatasetError(f"manifest not found: {manifest}")

    with open(manifest, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "image_file" not in reader.fieldnames or "caption" not in reader.fieldnames:
            raise DatasetError(f"manifest {manifest} must have header columns image_file,caption[,category]")
        rows = list(reader)
    if not rows:
        raise DatasetError(f"manifest {manifest} contains no data rows")

    records, errors, warnings = [], [], []
    valid_categories = {c.value: c for c in Category}
    for i, row in enumerate(rows, start=1):
        rel = (row.get("image_file") or "").strip()
        caption = (row.get("caption") or "").strip()
        raw_category = (row.get("category") or "").strip()
        path = root / rel
        if not rel:
            errors.append(RowError(i, rel, "missing image_file"))
            continue
        if not path.is_file():
            errors.append(RowError(i, str(path), "image file does not exist"))
            continue
        reason = _decodable(path)
        if reason is not None:
            errors.append(RowError(i, str(path), reason))
            continue
        if not caption:
            errors.append(RowError(i, str(path), "caption is empty"))
            continue
        category = None
        if raw_category:
            category = valid_categories.get(raw_category)
            if category is None:
                errors.append(RowError(i, str(path), f"unknown category {raw_category!r}"))
                continue
        words = normalize_words(caption)
        if len(words) > MAX_CONTENT_TOKENS:
            caption = " ".join(words[:MAX_CONTENT_TOKENS])
            msg = f"row {i}: caption truncated to {MAX_CONTENT_TOKENS} tokens"
            warnings.append(msg)
            log.warning(msg)
        records.append(CaptionedImage(image_ref=path, caption=caption, category=category))

    return IngestResult(records=records, errors=errors, warnings=warnings)
