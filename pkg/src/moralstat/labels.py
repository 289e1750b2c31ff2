"""Greedy point-label placement with overlap avoidance.

Labels are axis-aligned boxes sized by a fixed monospace metric (0.6 x
font size per character). Anchors are tried in priority order; each label
tries eight compass offsets, degrades to a short fallback text if all are
blocked, and is dropped (and recorded) if the fallback is blocked too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError

OFFSETS = ("E", "W", "N", "S", "NE", "NW", "SE", "SW")
CHAR_WIDTH = 0.6  # fraction of font size per character


@dataclass(frozen=True)
class PlacedLabel:
    anchor_index: int
    text: str
    box: tuple[float, float, float, float]  # x0, y0, x1, y1
    offset: str
    degraded: bool


@dataclass(frozen=True)
class LabelResult:
    placed: tuple[PlacedLabel, ...]
    dropped: tuple[int, ...]


def text_box_size(text: str, font_size: float) -> tuple[float, float]:
    return (CHAR_WIDTH * font_size * len(text), font_size)


def _candidate_box(anchor: np.ndarray, offset: str, w: float, h: float,
                   gap: float) -> tuple[float, float, float, float]:
    ax, ay = float(anchor[0]), float(anchor[1])
    if offset == "E":
        return (ax + gap, ay - h / 2, ax + gap + w, ay + h / 2)
    if offset == "W":
        return (ax - gap - w, ay - h / 2, ax - gap, ay + h / 2)
    if offset == "N":
        return (ax - w / 2, ay - gap - h, ax + w / 2, ay - gap)
    if offset == "S":
        return (ax - w / 2, ay + gap, ax + w / 2, ay + gap + h)
    if offset == "NE":
        return (ax + gap, ay - gap - h, ax + gap + w, ay - gap)
    if offset == "NW":
        return (ax - gap - w, ay - gap - h, ax - gap, ay - gap)
    if offset == "SE":
        return (ax + gap, ay + gap, ax + gap + w, ay + gap + h)
    if offset == "SW":
        return (ax - gap - w, ay + gap, ax - gap, ay + gap + h)
    raise NumericError(f"unknown offset {offset!r}")


def boxes_overlap(a: tuple[float, float, float, float],
                  b: tuple[float, float, float, float]) -> bool:
    """Strict interior overlap; shared edges do not count."""
    return a[0] < b[2] and a[2] > b[0] and a[1] < b[3] and a[3] > b[1]


def box_covers_point(box: tuple[float, float, float, float],
                     pt: np.ndarray, radius: float) -> bool:
    """True when the box intersects the disc of the given radius at pt."""
    px = min(max(float(pt[0]), box[0]), box[2])
    py = min(max(float(pt[1]), box[1]), box[3])
    dx, dy = float(pt[0]) - px, float(pt[1]) - py
    return dx * dx + dy * dy < radius * radius


def _default_priorities(anchors: np.ndarray) -> np.ndarray:
    center = anchors.mean(axis=0)
    diff = anchors - center
    if anchors.shape[0] >= 3:
        cov = diff.T @ diff / (anchors.shape[0] - 1)
        cond = np.linalg.cond(cov)
        if np.isfinite(cond) and cond < 1e12:
            inv = np.linalg.inv(cov)
            return np.einsum("ij,jk,ik->i", diff, inv, diff)
    return np.sum(diff ** 2, axis=1)


def place_labels(anchors: np.ndarray, texts, priorities=None,
                 fallback_texts=None, font_size: float = 10.0,
                 marker_radius: float = 3.0,
                 bounds: tuple[float, float, float, float] | None = None
                 ) -> LabelResult:
    """Place labels greedily, most-prioritized anchors first.

    Priority defaults to the squared Mahalanobis distance of each anchor
    from the anchor cloud. A candidate box is accepted when it overlaps no
    accepted box and no anchor's marker disc and stays inside bounds when
    given. Blocked labels retry with fallback_texts, then drop.
    """
    pts = np.asarray(anchors, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise NumericError("anchors must be an (n, 2) array")
    texts = [str(t) for t in texts]
    n = pts.shape[0]
    if len(texts) != n:
        raise NumericError("texts length must match anchors")
    if fallback_texts is not None:
        fallback_texts = [str(t) for t in fallback_texts]
        if len(fallback_texts) != n:
            raise NumericError("fallback_texts length must match anchors")
    if priorities is None:
        priorities = _default_priorities(pts) if n else np.zeros(0)
    priorities = np.asarray(priorities, dtype=float)
    order = sorted(range(n), key=lambda i: (-priorities[i], i))

    gap = marker_radius + 2.0
    accepted: list[PlacedLabel] = []
    dropped: list[int] = []

    def fits(box: tuple[float, float, float, float]) -> bool:
        if bounds is not None:
            if (box[0] < bounds[0] or box[1] < bounds[1]
                    or box[2] > bounds[2] or box[3] > bounds[3]):
                return False
        for other in accepted:
            if boxes_overlap(box, other.box):
                return False
        for j in range(n):
            if box_covers_point(box, pts[j], marker_radius):
                return False
        return True

    for i in order:
        placed = None
        for degraded, text in ((False, texts[i]),) + (
                ((True, fallback_texts[i]),)
                if fallback_texts is not None else ()):
            w, h = text_box_size(text, font_size)
            for offset in OFFSETS:
                box = _candidate_box(pts[i], offset, w, h, gap)
                if fits(box):
                    placed = PlacedLabel(anchor_index=i, text=text, box=box,
                                         offset=offset, degraded=degraded)
                    break
            if placed is not None:
                break
        if placed is None:
            dropped.append(i)
        else:
            accepted.append(placed)
    return LabelResult(placed=tuple(accepted), dropped=tuple(dropped))
