"""Synthetic shape/color scene generator.

Renders simple scenes (one colored shape over a ground strip and sky) with
template captions like "a red square on gray ground". Captions avoid any
left/right or orientation words so flips and small rotations never
invalidate them. Used as the training/evaluation fixture corpus.
"""

import csv
from pathlib import Path

import numpy as np
from PIL import Image

SHAPES = ("square", "circle", "triangle", "diamond")

COLORS = {
    "red": (220, 40, 40),
    "green": (40, 170, 60),
    "blue": (40, 80, 220),
    "yellow": (235, 220, 50),
    "purple": (160, 60, 200),
    "orange": (240, 140, 40),
}

GROUNDS = {
    "gray": (120, 120, 120),
    "brown": (140, 100, 60),
    "white": (235, 235, 235),
}

SKY_RGB = (155, 205, 235)

IMAGE_SIZES = ((512, 512), (640, 480), (768, 576))  # (W, H)


def _shape_mask(shape, h, w, cy, cx, r):
    yy, xx = np.mgrid[0:h, 0:w]
    if shape == "square":
        return (np.abs(xx - cx) <= r * 0.85) & (np.abs(yy - cy) <= r * 0.85)
    if shape == "circle":
        return (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    if shape == "triangle":
        # upward triangle: width grows linearly from apex to base
        t = (yy - (cy - r)) / (2.0 * r)
        return (t >= 0) & (t <= 1) & (np.abs(xx - cx) <= t * r)
    if shape == "diamond":
        return np.abs(xx - cx) + np.abs(yy - cy) <= r * 1.1
    raise ValueError(f"unknown shape {shape!r}")


def render_scene(shape: str, color: str, ground: str, size_wh, rng: np.random.Generator) -> np.ndarray:
    """One scene as an HxWx3 uint8 array."""
    w, h = size_wh
    img = np.empty((h, w, 3), dtype=np.float32)
    img[:] = SKY_RGB
    horizon = int(h * 0.55)
    img[horizon:] = GROUNDS[ground]

    cx = w / 2 + rng.uniform(-0.03, 0.03) * w
    cy = h * 0.5 + rng.uniform(-0.03, 0.03) * h
    r = 0.21 * min(h, w) * rng.uniform(0.9, 1.1)
    mask = _shape_mask(shape, h, w, cy, cx, r)
    img[mask] = COLORS[color]

    img += rng.normal(0.0, 2.5, size=img.shape).astype(np.float32)
    return np.clip(img, 0, 255).astype(np.uint8)


def caption_for(shape: str, color: str, ground: str) -> str:
    return f"a {color} {shape} on {ground} ground"


def generate_corpus(out_dir, count: int, seed: int) -> Path:
    """Write ``count`` scenes plus manifest.csv under out_dir; returns the manifest path."""
    out_dir = Path(out_dir)
    images_dir = out_dir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    combos = [(s, c, g) for s in SHAPES for c in COLORS for g in GROUNDS]
    order = rng.permutation(len(combos))
    picks = [combos[order[i % len(combos)]] for i in range(count)]

    manifest = out_dir / "manifest.csv"
    with open(manifest, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_file", "caption", "category"])
        for i, (shape, color, ground) in enumerate(picks):
            size = IMAGE_SIZES[int(rng.integers(len(IMAGE_SIZES)))]
            arr = render_scene(shape, color, ground, size, rng)
            rel = f"images/img_{i:03d}.png"
            Image.fromarray(arr).save(out_dir / rel)
            writer.writerow([rel, caption_for(shape, color, ground), "Descriptive"])
    return manifest
