"""Explorer data bundle.

Packs the dataset and a simplified base map into one JSON document the
browser explorer consumes: ring coordinates thinned with Douglas-Peucker
at 0.1% of the map extent, every variable vector at full precision,
region labels, the default conditioned-map settings, and the diverging
palette. Export is deterministic, so re-export is byte identical.
"""

from __future__ import annotations

import math

import numpy as np

from .color import DIVERGING8
from .dataset import REGION_NAMES, BaseMap, MoralDataset
from .scene import dumps_exact

SCHEMA = "moralstat/1"
SIMPLIFY_FRACTION = 0.001

DEFAULT_STATE = {
    "response": "Crime_prop",
    "given_x": "Literacy",
    "given_y": "Wealth",
    "k_x": 2,
    "k_y": 2,
    "overlap": 0.10,
}


def douglas_peucker(points: np.ndarray, tol: float) -> np.ndarray:
    """Thin an open polyline, keeping every point farther than tol from
    the chord of its segment. Coincident chord endpoints fall back to
    point distance, which also makes closed rings (first row = last row)
    work unchanged: the first split keeps the point farthest from the
    shared endpoint."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n <= 2:
        return pts.copy()
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        seg = pts[j] - pts[i]
        len2 = float(seg @ seg)
        sub = pts[i + 1:j]
        dx = sub[:, 0] - pts[i, 0]
        dy = sub[:, 1] - pts[i, 1]
        if len2 == 0.0:
            dist = np.hypot(dx, dy)
        else:
            dist = np.abs(dx * seg[1] - dy * seg[0]) / math.sqrt(len2)
        k = int(np.argmax(dist))
        if float(dist[k]) > tol:
            m = i + 1 + k
            keep[m] = True
            stack.append((i, m))
            stack.append((m, j))
    return pts[keep]


def simplify_ring(ring: np.ndarray, tol: float) -> np.ndarray:
    """Douglas-Peucker for one closed ring; rings that would collapse
    below a triangle are returned unchanged."""
    out = douglas_peucker(ring, tol)
    if len(out) < 4:
        return np.asarray(ring, dtype=float).copy()
    return out


def simplify_tolerance(bm: BaseMap) -> float:
    x0, y0, x1, y1 = bm.bounds()
    return SIMPLIFY_FRACTION * max(x1 - x0, y1 - y0)


def build_bundle(ds: MoralDataset, bm: BaseMap) -> dict:
    """Assemble the bundle document (plain dict, ready to serialize)."""
    od = ds.ordered()
    om = bm.ordered()
    tol = simplify_tolerance(bm)
    x0, y0, x1, y1 = bm.bounds()

    features = []
    for feat in om.features:
        rec = od.record_by_code(feat.code)
        rings = [simplify_ring(r, tol).tolist() for r in feat.rings]
        features.append({
            "code": feat.code,
            "name": rec.name,
            "region": rec.region,
            "rings": rings,
        })

    codes = [int(c) for c in od.codes()]
    variables = {}
    for name in od.variable_names():
        meta = od.meta(name)
        variables[name] = {
            "kind": meta.kind,
            "more_is_better": meta.more_is_better,
            "values": [float(v) for v in od.column(name)],
        }

    return {
        "schema": SCHEMA,
        "extent": [x0, y0, x1, y1],
        "simplify_tolerance": tol,
        "codes": codes,
        "features": features,
        "regions": dict(REGION_NAMES),
        "variables": variables,
        "defaults": dict(DEFAULT_STATE),
        "palette": list(DIVERGING8),
    }


def bundle_bytes(ds: MoralDataset, bm: BaseMap) -> bytes:
    """Serialized bundle; floats in shortest round-trip form so the
    consumer reparses the exact values this side computed with."""
    return (dumps_exact(build_bundle(ds, bm)) + "\n").encode("utf-8")
