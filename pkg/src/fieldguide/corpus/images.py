"""Image preprocessing and training-time augmentation.

Pipeline: center-crop to a 1024x1024 window (largest centered square when
the input is smaller), bilinear-resize to 256x256, values scaled to [0,1].
Augmentation is a coin-flip horizontal mirror plus a rotation drawn from
[-5, +5] degrees with black fill.
"""

import numpy as np
from PIL import Image

from .. import kernels

TARGET_SIZE = 256
CROP_SIZE = 1024
FLIP_PROB = 0.5
MAX_ROTATION_DEG = 5.0


def load_image(path) -> np.ndarray:
    """Decode an image file to an HxWx3 uint8 RGB array."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


def _to_unit_float(raw: np.ndarray) -> np.ndarray:
    if raw.ndim == 2:
        raw = raw[:, :, None].repeat(3, axis=2)
    if raw.ndim != 3 or raw.shape[2] != 3:
        raise ValueError(f"expected HxWx3 image, got shape {raw.shape}")
    if raw.shape[0] < 1 or raw.shape[1] < 1:
        raise ValueError("image has zero size")
    if raw.dtype == np.uint8:
        return raw.astype(np.float32) / 255.0
    arr = raw.astype(np.float32)
    if arr.max(initial=0.0) > 1.0 + 1e-6:
        raise ValueError("float image values must already be in [0,1]")
    return arr


def center_crop_window(h: int, w: int) -> tuple[int, int, int, int]:
    """(y0, x0, side_h, side_w) of the crop window for an HxW input."""
    if h >= CROP_SIZE and w >= CROP_SIZE:
        side_h = side_w = CROP_SIZE
    else:
        side_h = side_w = min(h, w)
    return (h - side_h) // 2, (w - side_w) // 2, side_h, side_w


def preprocess_image(raw) -> np.ndarray:
    """Raw RGB image (array or PIL) -> 256x256x3 float32 in [0,1]."""
    if isinstance(raw, Image.Image):
        raw = np.asarray(raw.convert("RGB"))
    arr = _to_unit_float(np.asarray(raw))
    h, w = arr.shape[:2]
    y0, x0, sh, sw = center_crop_window(h, w)
    cropped = arr[y0 : y0 + sh, x0 : x0 + sw]
    if cropped.shape[:2] == (TARGET_SIZE, TARGET_SIZE):
        out = cropped.copy()
    else:
        out = kernels.bilinear_resize(np.ascontiguousarray(cropped), TARGET_SIZE, TARGET_SIZE)
    return np.clip(out, 0.0, 1.0, out=out)


def apply_augment(tensor: np.ndarray, flip: bool, angle_deg: float) -> np.ndarray:
    """Deterministic augmentation core; flip=False, angle=0 is the identity."""
    out = tensor
    if flip:
        out = out[:, ::-1, :]
    if angle_deg != 0.0:
        out = kernels.rotate_bilinear(np.ascontiguousarray(out), angle_deg)
    else:
        out = np.ascontiguousarray(out)
    return out


def augment(tensor: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random flip (p=0.5) then random rotation in [-5, 5] degrees."""
    flip = rng.random() < FLIP_PROB
    angle = rng.uniform(-MAX_ROTATION_DEG, MAX_ROTATION_DEG)
    return apply_augment(tensor, flip, angle)
