"""Shared exception types."""


class DatasetError(ValueError):
    """Dataset-level ingestion failure (empty manifest, unreadable root)."""


class TokenizeError(ValueError):
    """Text normalizes to nothing."""


class ModelFormatError(ValueError):
    """Model artifact is corrupt, truncated, or has mismatched metadata."""


class TrainingDiverged(RuntimeError):
    """Loss became non-finite; carries the epoch/step it happened at."""

    def __init__(self, epoch, step, message=""):
        self.epoch = epoch
        self.step = step
        super().__init__(message or f"training loss became non-finite at epoch {epoch}, step {step}")


class SessionNotFound(KeyError):
    """Unknown session id."""
