"""Dominant-orientation estimation for contours and rotation-normalized chip
extraction.

Orientation is the argmax over integer degrees of a magnitude-weighted sum of
Gaussians, one per contour segment, with angular wraparound (179 degrees and
0 degrees are adjacent).  The plain per-angle magnitude sum is kept as the
baseline it improves on.

Traced pixel chains step at multiples of 45 degrees, so estimating from raw
unit steps quantizes the answer; :func:`resample_chain` subsamples the chain
first so segments span several pixels and carry the true local direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.ndimage import map_coordinates

from .contours import BBox, Candidate

CHIP_SIZE = 200
CHIP_PAD = 0.05


class OutOfBoundsError(ValueError):
    """The padded sampling window exits the source image."""


@dataclass
class SegmentAngle:
    angle: float  # degrees in [0, 180)
    magnitude: float  # pixels


@dataclass
class OrientationProfile:
    """Gaussian-sum orientation response at each integer degree 0..179."""

    values: np.ndarray  # (180,)
    sigma: float
    weights: np.ndarray  # per-segment normalization factors, sum to 1


@dataclass
class Chip:
    pixels: np.ndarray  # (size, size) uint8
    applied_angle: float
    clamped: bool = False
    source: Optional[Candidate] = None


def _segment_arrays(contour: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(contour, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("contour needs at least 2 points")
    nxt = np.roll(pts, -1, axis=0)
    xd = pts[:, 0] - nxt[:, 0]
    yd = pts[:, 1] - nxt[:, 1]
    neg = yd < 0
    xd[neg] = -xd[neg]
    yd[neg] = -yd[neg]
    mag = np.hypot(xd, yd)
    ok = mag > 0
    if not ok.any():
        raise ValueError("degenerate contour: all segments have zero length")
    ang = np.degrees(np.arctan2(yd[ok], xd[ok])) % 180.0
    return ang, mag[ok]


def segment_angles(contour: np.ndarray) -> list[SegmentAngle]:
    """Angle in [0, 180) and length of every consecutive point pair (with
    wraparound); zero-length segments are dropped."""
    ang, mag = _segment_arrays(contour)
    return [SegmentAngle(float(a), float(m)) for a, m in zip(ang, mag)]


def dominant_angle_sum(contour: np.ndarray) -> int:
    """Baseline: argmax over integer degrees of the summed magnitudes of
    segments whose rounded angle equals that degree.  Ties break toward the
    smaller angle."""
    ang, mag = _segment_arrays(contour)
    bins = np.rint(ang).astype(int) % 180
    sums = np.bincount(bins, weights=mag, minlength=180)
    return int(np.argmax(sums))


def orientation_profile(contour: np.ndarray, sigma: float = 1.0) -> OrientationProfile:
    """Magnitude-weighted Gaussian sum over segment angles, evaluated at each
    integer degree with wraparound distance."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    ang, mag = _segment_arrays(contour)
    weights = mag / mag.sum()
    thetas = np.arange(180.0)
    diff = np.abs(thetas[:, None] - ang[None, :])
    diff = np.minimum(diff, 180.0 - diff)
    coef = 1.0 / (sigma * np.sqrt(2.0 * np.pi))
    values = (weights[None, :] * coef * np.exp(-0.5 * (diff / sigma) ** 2)).sum(axis=1)
    return OrientationProfile(values=values, sigma=sigma, weights=weights)


def dominant_angle_gaussian(contour: np.ndarray, sigma: float = 1.0) -> int:
    """Argmax of the Gaussian orientation profile over integer degrees; ties
    break toward the smaller angle."""
    return int(np.argmax(orientation_profile(contour, sigma).values))


def resample_chain(contour: np.ndarray, step: int = 10) -> np.ndarray:
    """Every step-th point of a closed chain, so segment vectors span several
    pixels.  The step shrinks for short chains to keep at least 8 vectors."""
    pts = np.asarray(contour)
    n = len(pts)
    eff = max(1, min(step, n // 8))
    return pts[::eff]


def candidate_angle(cand: Candidate, sigma: float = 1.0, chain_step: int = 10) -> int:
    """Dominant orientation of a traced candidate contour."""
    return dominant_angle_gaussian(resample_chain(cand.contour, chain_step), sigma)


def _chip_grid(
    points: np.ndarray, center: tuple[float, float], angle_deg: float, pad: float, size: int
) -> tuple[np.ndarray, np.ndarray]:
    """Source-image sample coordinates for a chip: the tight bound of the
    rotated points, expanded by `pad` per side, on a size x size grid."""
    theta = np.radians(angle_deg)
    c, s = np.cos(theta), np.sin(theta)
    cx, cy = center
    px = np.asarray(points, dtype=np.float64)[:, 0] - cx
    py = np.asarray(points, dtype=np.float64)[:, 1] - cy
    u = c * px + s * py
    v = -s * px + c * py
    u0, u1 = u.min(), u.max()
    v0, v1 = v.min(), v.max()
    u0, u1 = u0 - pad * (u1 - u0), u1 + pad * (u1 - u0)
    v0, v1 = v0 - pad * (v1 - v0), v1 + pad * (v1 - v0)
    us = np.linspace(u0, u1, size)
    vs = np.linspace(v0, v1, size)
    U, V = np.meshgrid(us, vs)
    X = cx + c * U - s * V
    Y = cy + s * U + c * V
    return X, Y


def _sample(gray: np.ndarray, X: np.ndarray, Y: np.ndarray, clamp: bool) -> tuple[np.ndarray, bool]:
    h, w = gray.shape
    out = X.min() < 0 or Y.min() < 0 or X.max() > w - 1 or Y.max() > h - 1
    if out and not clamp:
        raise OutOfBoundsError("padded chip window exits image bounds")
    vals = map_coordinates(np.asarray(gray, dtype=np.float64), [Y, X], order=1, mode="nearest")
    return np.clip(np.rint(vals), 0, 255).astype(np.uint8), out


def extract_chip(
    gray: np.ndarray,
    cand: Candidate,
    pad: float = CHIP_PAD,
    size: int = CHIP_SIZE,
    clamp: bool = False,
) -> Chip:
    """Rotation-normalized grayscale chip for a candidate.

    The image is resampled (bilinear) on a grid aligned with the candidate's
    angle, covering the rotated contour's bound plus `pad` per side, and
    scaled to size x size.  With clamp=False a window leaving the image
    raises :class:`OutOfBoundsError` (training drops such candidates); with
    clamp=True edge values are replicated and the chip is flagged.
    """
    if cand.angle is None:
        raise ValueError("candidate angle not computed; run alignment first")
    X, Y = _chip_grid(cand.contour, cand.bbox.center, cand.angle, pad, size)
    pixels, clamped = _sample(gray, X, Y, clamp)
    return Chip(pixels=pixels, applied_angle=float(cand.angle), clamped=clamped, source=cand)


def extract_box_chip(
    gray: np.ndarray,
    box: BBox,
    angle: float,
    pad: float = CHIP_PAD,
    size: int = CHIP_SIZE,
    clamp: bool = True,
) -> Chip:
    """Chip for a bare box (no contour): bounds the rotated box corners."""
    X, Y = _chip_grid(box.corners(), box.center, angle, pad, size)
    pixels, clamped = _sample(gray, X, Y, clamp)
    return Chip(pixels=pixels, applied_angle=float(angle), clamped=clamped)


def extract_box_chips(
    gray: np.ndarray,
    boxes: list[BBox],
    angle: float,
    pad: float = CHIP_PAD,
    size: int = CHIP_SIZE,
) -> np.ndarray:
    """Chips for many boxes at one shared angle, sampled in a single pass.
    Returns (len(boxes), size, size) uint8; windows are edge-clamped."""
    if not boxes:
        return np.zeros((0, size, size), dtype=np.uint8)
    xs, ys = [], []
    for box in boxes:
        X, Y = _chip_grid(box.corners(), box.center, angle, pad, size)
        xs.append(X)
        ys.append(Y)
    X = np.stack(xs)
    Y = np.stack(ys)
    vals = map_coordinates(np.asarray(gray, dtype=np.float64), [Y, X], order=1, mode="nearest")
    return np.clip(np.rint(vals), 0, 255).astype(np.uint8)
