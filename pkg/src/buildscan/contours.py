"""Border tracing of edge maps into closed contours, candidate records, and
the size/duplicate filtering rules.

Tracing labels 8-connected edge components and walks each component's outer
border (Moore neighborhood, clockwise, Jacob's stopping criterion), which is
linear in pixel count overall.  Holes are not traced; candidates are consumed
as bounding regions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from .edges import ThresholdPair

# Moore neighborhood as (dy, dx), clockwise from East in image coordinates
# (y grows downward).
_DIRS = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
_DIR_INDEX = {d: i for i, d in enumerate(_DIRS)}


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box with continuous corner coordinates, the region
    [left, right] x [top, bottom]; width = right - left."""

    left: float
    top: float
    right: float
    bottom: float

    def __post_init__(self):
        if not (self.left < self.right and self.top < self.bottom):
            raise ValueError(f"degenerate box {self}")

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.bottom - self.top

    @property
    def center(self) -> tuple[float, float]:
        return (self.left + self.right) / 2.0, (self.top + self.bottom) / 2.0

    def area(self) -> float:
        return self.width * self.height

    def iou(self, other: "BBox") -> float:
        iw = min(self.right, other.right) - max(self.left, other.left)
        ih = min(self.bottom, other.bottom) - max(self.top, other.top)
        if iw <= 0 or ih <= 0:
            return 0.0
        inter = iw * ih
        return inter / (self.area() + other.area() - inter)

    def corners(self) -> np.ndarray:
        """The four corners as an (4, 2) array of (x, y)."""
        return np.array(
            [
                [self.left, self.top],
                [self.right, self.top],
                [self.right, self.bottom],
                [self.left, self.bottom],
            ]
        )


@dataclass
class Candidate:
    """A traced contour hypothesized to contain a building."""

    contour: np.ndarray  # (N, 2) points (x, y), closed chain with wraparound
    bbox: BBox
    source: ThresholdPair
    angle: Optional[float] = None  # degrees in [0, 180), set by alignment
    clamped: bool = field(default=False, compare=False)


def _trace_border(padded: np.ndarray, cid: int, y0: int, x0: int) -> list[tuple[int, int]]:
    """Walk the outer border of component `cid` starting at its uppermost,
    leftmost pixel (y0, x0) in padded-array coordinates."""
    pts = [(x0, y0)]
    cur = (y0, x0)
    bdir = 4  # backtrack starts at the West neighbor, outside the component
    entry = None
    cap = 4 * padded.size
    for _ in range(cap):
        move = -1
        for k in range(1, 9):
            d = (bdir + k) % 8
            dy, dx = _DIRS[d]
            if padded[cur[0] + dy, cur[1] + dx] == cid:
                move = d
                break
        if move < 0:
            return pts  # isolated pixel
        if entry is None:
            entry = (cur, move)
        elif (cur, move) == entry:
            break
        pdy, pdx = _DIRS[(move - 1) % 8]
        back = (cur[0] + pdy, cur[1] + pdx)
        dy, dx = _DIRS[move]
        cur = (cur[0] + dy, cur[1] + dx)
        pts.append((cur[1], cur[0]))
        bdir = _DIR_INDEX[(back[0] - cur[0], back[1] - cur[1])]
    if len(pts) > 1 and pts[-1] == pts[0]:
        pts.pop()
    return pts


def trace(edge_map: np.ndarray) -> list[np.ndarray]:
    """Outer border of every 8-connected edge component, one closed contour
    each, as (N, 2) int32 arrays of (x, y) points.

    Components whose border chain has fewer than 3 points (isolated pixels,
    pixel pairs) are dropped; they cannot form a closed chain.
    """
    edge_map = np.asarray(edge_map, dtype=bool)
    labels, n = ndimage.label(edge_map, structure=np.ones((3, 3), dtype=int))
    if n == 0:
        return []
    padded = np.zeros((labels.shape[0] + 2, labels.shape[1] + 2), dtype=labels.dtype)
    padded[1:-1, 1:-1] = labels
    contours = []
    for cid, sl in enumerate(ndimage.find_objects(labels), start=1):
        sub = labels[sl] == cid
        first = int(np.argmax(sub))
        dy, dx = divmod(first, sub.shape[1])
        y0, x0 = sl[0].start + dy + 1, sl[1].start + dx + 1
        pts = _trace_border(padded, cid, y0, x0)
        if len(pts) < 3:
            continue
        contours.append(np.asarray(pts, dtype=np.int32) - 1)
    return contours


def bounding_box(contour: np.ndarray) -> BBox:
    """Tight axis-aligned bound of a contour's points."""
    contour = np.asarray(contour)
    x0, y0 = contour.min(axis=0)
    x1, y1 = contour.max(axis=0)
    return BBox(float(x0), float(y0), float(x1), float(y1))


def filter_candidates(
    cands: list[Candidate],
    min_points: int = 20,
    dedup_tol: float = 5.0,
    min_side: float = 10.0,
) -> list[Candidate]:
    """Drop candidates that are too small to classify and near-duplicates.

    A candidate survives if its contour has at least `min_points` points and
    its box sides are at least `min_side`.  Among candidates whose four box
    edges each differ by strictly less than `dedup_tol`, the first in
    enumeration order wins; output order is preserved.  Idempotent.
    """
    if dedup_tol < 0:
        raise ValueError("dedup_tol must be >= 0")
    kept: list[Candidate] = []
    buckets: dict[tuple[int, int, int, int], list[BBox]] = {}
    for cand in cands:
        if len(cand.contour) < min_points:
            continue
        b = cand.bbox
        if b.width < min_side or b.height < min_side:
            continue
        if dedup_tol > 0:
            key = tuple(int(v // dedup_tol) for v in (b.left, b.top, b.right, b.bottom))
            if _near_duplicate(b, key, buckets, dedup_tol):
                continue
            buckets.setdefault(key, []).append(b)
        kept.append(cand)
    return kept


def _near_duplicate(b: BBox, key, buckets, tol: float) -> bool:
    for dl in (-1, 0, 1):
        for dt in (-1, 0, 1):
            for dr in (-1, 0, 1):
                for db in (-1, 0, 1):
                    cell = buckets.get((key[0] + dl, key[1] + dt, key[2] + dr, key[3] + db))
                    if not cell:
                        continue
                    for o in cell:
                        if (
                            abs(o.left - b.left) < tol
                            and abs(o.top - b.top) < tol
                            and abs(o.right - b.right) < tol
                            and abs(o.bottom - b.bottom) < tol
                        ):
                            return True
    return False
