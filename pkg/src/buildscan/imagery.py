"""Raster primitives: decoding, grayscale conversion, integral images.

Images are plain numpy arrays: RGB is (H, W, 3) uint8, grayscale is (H, W)
uint8.  Integral tables are (H+1, W+1) int64 with a zero top row and left
column so rectangle sums need exactly four lookups.

Rectangles are half-open pixel index ranges [x0, x1) x [y0, y1) everywhere
in this module.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

# ITU-R BT.601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


def load_image(path) -> np.ndarray:
    """Decode a PNG/PGM (or any Pillow-readable) raster to (H, W, 3) uint8."""
    with Image.open(path) as im:
        rgb = im.convert("RGB")
        arr = np.asarray(rgb, dtype=np.uint8)
    if arr.size == 0:
        raise ValueError(f"zero-dimension image: {path}")
    return arr


def to_grayscale(rgb: np.ndarray) -> np.ndarray:
    """Per-pixel luma, rounded and clamped to [0, 255]."""
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) array, got shape {rgb.shape}")
    y = rgb.astype(np.float64) @ _LUMA
    return np.clip(np.rint(y), 0, 255).astype(np.uint8)


def integral(gray: np.ndarray) -> np.ndarray:
    """Summed-area table of a grayscale image.

    Returns an (H+1, W+1) int64 array; entry [y, x] is the sum of all pixels
    above and left of (x, y), exclusive.  64-bit sums cannot overflow for any
    raster smaller than ~3.6e16 pixels.
    """
    gray = np.asarray(gray)
    if gray.ndim != 2:
        raise ValueError(f"expected 2-d grayscale array, got shape {gray.shape}")
    h, w = gray.shape
    ii = np.zeros((h + 1, w + 1), dtype=np.int64)
    np.cumsum(gray, axis=0, dtype=np.int64, out=ii[1:, 1:])
    np.cumsum(ii[1:, 1:], axis=1, out=ii[1:, 1:])
    return ii


def rect_sum(ii: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> int:
    """Exact pixel sum over the half-open rectangle [x0, x1) x [y0, y1)."""
    h, w = ii.shape[0] - 1, ii.shape[1] - 1
    if not (0 <= x0 <= x1 <= w and 0 <= y0 <= y1 <= h):
        raise ValueError(f"rectangle ({x0},{y0},{x1},{y1}) outside {w}x{h} image")
    return int(ii[y1, x1] - ii[y0, x1] - ii[y1, x0] + ii[y0, x0])


def write_pgm(gray: np.ndarray, path) -> None:
    """Write a grayscale image as binary PGM (P5). Debug-dump format."""
    gray = np.ascontiguousarray(gray, dtype=np.uint8)
    h, w = gray.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(gray.tobytes())
