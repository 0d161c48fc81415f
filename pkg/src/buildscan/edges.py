"""Canny edge detection with [0, 1] hysteresis thresholds, plus the
threshold-grid generator used for sample-and-merge candidate generation.

The gradient and non-maximum suppression do not depend on the thresholds, so
:func:`gradient` / :func:`suppressed_magnitude` are computed once per image
and :func:`hysteresis` is applied per threshold pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

GAUSS_SIZE = 5
GAUSS_SIGMA = 1.4

# Direction bins 0..3 = gradient at 0/45/90/135 degrees; (dy, dx) steps along
# the gradient for each bin.
_BIN_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1))


@dataclass(frozen=True)
class ThresholdPair:
    """Hysteresis thresholds, both in [0, 1] with low <= high."""

    low: float
    high: float

    def __post_init__(self):
        if not (0.0 <= self.low <= self.high <= 1.0):
            raise ValueError(f"need 0 <= low <= high <= 1, got ({self.low}, {self.high})")


@dataclass
class GradientField:
    """Smoothed gradient magnitudes normalized to [0, 1] and quantized
    directions (bin index 0..3, meaningful only where magnitude > 0)."""

    magnitude: np.ndarray
    direction: np.ndarray


def _gauss_kernel(size: int = GAUSS_SIZE, sigma: float = GAUSS_SIGMA) -> np.ndarray:
    r = np.arange(size) - (size - 1) / 2
    k = np.exp(-0.5 * (r / sigma) ** 2)
    return k / k.sum()


def gradient(gray: np.ndarray) -> GradientField:
    """Gaussian-smoothed Sobel gradient, magnitude scaled so the global max
    is 1 (all-zero for constant images), direction quantized to 4 bins."""
    gray = np.asarray(gray, dtype=np.float64)
    if gray.ndim != 2 or min(gray.shape) < 3:
        raise ValueError(f"image too small for gradient: shape {gray.shape}")
    k = _gauss_kernel()
    smooth = ndimage.correlate1d(gray, k, axis=0, mode="nearest")
    smooth = ndimage.correlate1d(smooth, k, axis=1, mode="nearest")
    dx = ndimage.sobel(smooth, axis=1, mode="nearest")
    dy = ndimage.sobel(smooth, axis=0, mode="nearest")
    mag = np.hypot(dx, dy)
    peak = mag.max()
    if peak > 0:
        mag /= peak
    ang = np.degrees(np.arctan2(dy, dx)) % 180.0
    direction = (np.floor((ang + 22.5) / 45.0).astype(np.int8)) % 4
    return GradientField(magnitude=mag, direction=direction)


def suppressed_magnitude(gf: GradientField) -> np.ndarray:
    """Non-maximum suppression: zero out pixels that are not a local maximum
    along their gradient direction.

    Two-pixel plateaus keep only the first pixel along the gradient step, so
    ideal step edges thin to one-pixel lines.
    """
    mag = gf.magnitude
    h, w = mag.shape
    padded = np.zeros((h + 2, w + 2))
    padded[1:-1, 1:-1] = mag
    out = np.zeros_like(mag)
    for b, (dy, dx) in enumerate(_BIN_OFFSETS):
        fwd = padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        back = padded[1 - dy : 1 - dy + h, 1 - dx : 1 - dx + w]
        keep = (gf.direction == b) & (mag > 0) & (mag > back) & (mag >= fwd)
        out[keep] = mag[keep]
    return out


def hysteresis(nms: np.ndarray, t: ThresholdPair) -> np.ndarray:
    """Boolean edge map: pixels >= high seed edges; pixels in [low, high) are
    edges iff 8-connected to a seed through in-band pixels."""
    weak = nms >= t.low if t.low > 0 else nms > 0
    strong = nms >= t.high
    if not strong.any():
        return np.zeros_like(weak)
    labels, _ = ndimage.label(weak, structure=np.ones((3, 3), dtype=int))
    seed_ids = np.unique(labels[strong])
    keep = np.zeros(labels.max() + 1, dtype=bool)
    keep[seed_ids] = True
    keep[0] = False
    return keep[labels]


def canny(gray: np.ndarray, t: ThresholdPair) -> np.ndarray:
    """Full Canny pass: smooth, gradient, NMS, hysteresis.  Returns a boolean
    edge map the size of the input."""
    return hysteresis(suppressed_magnitude(gradient(gray)), t)


def threshold_grid(step: float) -> list[ThresholdPair]:
    """All (low, high) pairs with components in {0, step, 2*step, ..., 1} and
    low <= high, ascending by (low, high).

    `step` must divide 1 within 1e-9.  A step of s yields n(n+1)/2 pairs for
    n = 1/s + 1 grid values.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"step {step} does not divide 1")
    values = [i / n for i in range(n + 1)]
    return [ThresholdPair(lo, hi) for lo in values for hi in values if lo <= hi]


def threshold_grid_cartesian(step: float) -> list[ThresholdPair]:
    """Comparison grid: the full Cartesian product over the nonzero grid
    values, unordered pairs swapped into low <= high form.  For step 0.05
    this is 20 x 20 = 400 pairs (with repeats after swapping)."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f"step {step} does not divide 1")
    values = [i / n for i in range(1, n + 1)]
    return [ThresholdPair(min(a, b), max(a, b)) for a in values for b in values]
