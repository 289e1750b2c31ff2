"""Statistical graphics: choropleths, scatter overlays, glyph maps,
color-blend maps, conditioned choropleth grids, and fitted/residual maps.

Every builder returns a Scene (see scene.py) and consumes pre-ordered
inputs, so the output is a pure function of the data values regardless of
source row order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .color import (ColorRGB, DIVERGING8, NEUTRAL, from_hex, rgb_blend,
                    sequential_ramp)
from .dataset import BaseMap, MapFeature, MoralDataset
from .errors import DataError, NumericError
from .labels import place_labels
from .mvstats import BiplotGeometry, boxplot_outside
from .numcore import (data_ellipse, loess, mahalanobis_sq, outside_ellipse,
                      rank_transform)
from .scene import (MarkerPrim, PolygonPrim, PolylinePrim, Scene, Style,
                    TextPrim, translate)

GROUP_PALETTE = ("#1B9E77", "#D95F02", "#7570B3", "#E7298A", "#66A61E",
                 "#E6AB02", "#A6761D", "#666666")
MAP_STROKE = "#666666"
BAR_FILL = "#FFD700"


# ---------------------------------------------------------------------------
# polygon geometry helpers

def ring_area(ring: np.ndarray) -> float:
    """Signed shoelace area of a closed ring."""
    pts = np.asarray(ring, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def ring_centroid(ring: np.ndarray) -> np.ndarray:
    """Area centroid of a closed ring; vertex mean when degenerate."""
    pts = np.asarray(ring, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    cross = x[:-1] * y[1:] - x[1:] * y[:-1]
    a = 0.5 * float(np.sum(cross))
    if abs(a) < 1e-12:
        return pts[:-1].mean(axis=0)
    cx = float(np.sum((x[:-1] + x[1:]) * cross)) / (6.0 * a)
    cy = float(np.sum((y[:-1] + y[1:]) * cross)) / (6.0 * a)
    return np.array([cx, cy])


def point_in_rings(pt: np.ndarray, rings) -> bool:
    """Even-odd crossing test over all rings of a feature."""
    px, py = float(pt[0]), float(pt[1])
    inside = False
    for ring in rings:
        pts = np.asarray(ring, dtype=float)
        x, y = pts[:, 0], pts[:, 1]
        for i in range(len(pts) - 1):
            x0, y0, x1, y1 = x[i], y[i], x[i + 1], y[i + 1]
            if (y0 > py) != (y1 > py):
                t = (py - y0) / (y1 - y0)
                if px < x0 + t * (x1 - x0):
                    inside = not inside
    return inside


def label_point(feature: MapFeature) -> np.ndarray:
    """Interior anchor for feature annotations.

    Centroid of the largest-area ring; when that falls outside (concave
    shapes), the midpoint of the widest inside interval along the
    centroid's horizontal line is used instead.
    """
    largest = max(feature.rings, key=lambda r: abs(ring_area(r)))
    c = ring_centroid(largest)
    if point_in_rings(c, feature.rings):
        return c
    py = c[1]
    xs: list[float] = []
    for ring in feature.rings:
        pts = np.asarray(ring, dtype=float)
        for i in range(len(pts) - 1):
            y0, y1 = pts[i, 1], pts[i + 1, 1]
            if (y0 > py) != (y1 > py):
                t = (py - y0) / (y1 - y0)
                xs.append(float(pts[i, 0] + t * (pts[i + 1, 0] - pts[i, 0])))
    xs.sort()
    best, width = c, -1.0
    for i in range(0, len(xs) - 1, 2):
        w = xs[i + 1] - xs[i]
        if w > width:
            width = w
            best = np.array([(xs[i] + xs[i + 1]) / 2.0, py])
    return best


@dataclass(frozen=True)
class MapTransform:
    """Aspect-preserving map-to-device transform with a y flip."""

    scale: float
    x_min: float
    y_max: float
    off_x: float
    off_y: float

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty_like(pts)
        out[:, 0] = self.off_x + (pts[:, 0] - self.x_min) * self.scale
        out[:, 1] = self.off_y + (self.y_max - pts[:, 1]) * self.scale
        return out


def map_transform(bounds: tuple[float, float, float, float], width: float,
                  height: float, margin: float = 10.0) -> MapTransform:
    x0, y0, x1, y1 = bounds
    dx = max(x1 - x0, 1e-12)
    dy = max(y1 - y0, 1e-12)
    scale = min((width - 2 * margin) / dx, (height - 2 * margin) / dy)
    off_x = (width - dx * scale) / 2.0
    off_y = (height - dy * scale) / 2.0
    return MapTransform(scale=scale, x_min=x0, y_max=y1,
                        off_x=off_x, off_y=off_y)


def _feature_polygons(basemap: BaseMap, tf: MapTransform,
                      fill_by_code: dict[int, str | None],
                      stroke: str = MAP_STROKE,
                      stroke_width: float = 0.6) -> list[PolygonPrim]:
    prims = []
    for feat in basemap.ordered().features:
        fill = fill_by_code.get(feat.code)
        style = Style(fill=fill if fill is not None else "none",
                      stroke=stroke, stroke_width=stroke_width)
        prims.append(PolygonPrim(
            rings=tuple(tf(r) for r in feat.rings),
            style=style, feature_id=feat.code))
    return prims


def _rank_text(rank: float) -> str:
    return str(int(rank)) if float(rank).is_integer() else f"{rank:.1f}"


# ---------------------------------------------------------------------------
# rank choropleth

def rank_choropleth(basemap: BaseMap, values_by_code: dict[int, float],
                    rank_one_is: str = "highest",
                    darker_is: str = "worse", title: str | None = None,
                    width: float = 480.0, height: float = 520.0,
                    annotate: bool = True,
                    palette: tuple[str, str] | None = None) -> Scene:
    """Choropleth shaded by rank through the sequential ramp.

    With darker_is = "rank1" the rank-1 feature takes the dark end of the
    ramp. With darker_is = "worse" the caller ranks so rank 1 is best and
    the highest rank number takes the dark end. palette overrides the
    (light, dark) ramp endpoints with two hex colors.
    """
    if darker_is not in ("worse", "rank1"):
        raise DataError(f"darker_is must be worse or rank1, got {darker_is!r}")
    ramp_light = ramp_dark = None
    if palette is not None:
        if len(palette) != 2:
            raise DataError("palette must be a (light, dark) hex pair")
        ramp_light = from_hex(palette[0])
        ramp_dark = from_hex(palette[1])
    bm = basemap.ordered()
    codes = [c for c in sorted(values_by_code) if c in set(bm.codes())]
    missing_map = [c for c in sorted(values_by_code) if c not in set(bm.codes())]
    notes = [f"code {c} has no map feature" for c in missing_map]
    vals = np.array([values_by_code[c] for c in codes], dtype=float)
    ranks = rank_transform(vals, rank_one_is) if len(codes) else np.zeros(0)
    n = len(codes)
    fills: dict[int, str | None] = {}
    rank_by_code: dict[int, float] = {}
    for c, r in zip(codes, ranks):
        if n > 1:
            t = (n - r) / (n - 1) if darker_is == "rank1" else (r - 1) / (n - 1)
        else:
            t = 1.0
        fills[c] = sequential_ramp(t, ramp_light, ramp_dark).hex
        rank_by_code[c] = float(r)
    for feat in bm.features:
        if feat.code not in fills:
            fills[feat.code] = None
            notes.append(f"code {feat.code} has no value; drawn hollow")

    tf = map_transform(bm.bounds(), width, height - 24.0, margin=10.0)
    prims: list = []
    if title:
        prims.append(TextPrim(xy=(width / 2.0, 16.0), text=title,
                              font_size=13.0, anchor="middle"))
    body = _feature_polygons(bm, tf, fills)
    body = [translate(p, 0.0, 24.0) for p in body]
    prims.extend(body)
    if annotate:
        font = max(6.0, width / 64.0)
        for feat in bm.features:
            if feat.code not in rank_by_code:
                continue
            pt = tf(label_point(feat))[0]
            prims.append(TextPrim(
                xy=(float(pt[0]), float(pt[1]) + 24.0 + font * 0.35),
                text=_rank_text(rank_by_code[feat.code]),
                font_size=font, anchor="middle",
                style=Style(fill="#111111"), feature_id=feat.code))
    return Scene(width=width, height=height, layers=tuple(prims),
                 notes=tuple(notes))


# ---------------------------------------------------------------------------
# scatter framework

def pad_extent(lo: float, hi: float) -> tuple[float, float]:
    if hi <= lo:
        pad = max(abs(hi), 1.0) * 0.05
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


@dataclass(frozen=True)
class PlotTransform:
    x0: float
    x1: float
    y0: float
    y1: float
    left: float
    right: float
    top: float
    bottom: float

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.empty_like(pts)
        sx = (self.right - self.left) / (self.x1 - self.x0)
        sy = (self.bottom - self.top) / (self.y1 - self.y0)
        out[:, 0] = self.left + (pts[:, 0] - self.x0) * sx
        out[:, 1] = self.bottom - (pts[:, 1] - self.y0) * sy
        return out


def plot_frame(x: np.ndarray, y: np.ndarray, width: float, height: float,
                x_label: str, y_label: str, title: str | None = None,
                left: float = 52.0, right_pad: float = 14.0,
                top: float = 30.0, bottom_pad: float = 40.0
                ) -> tuple[PlotTransform, list]:
    x0, x1 = pad_extent(float(np.min(x)), float(np.max(x)))
    y0, y1 = pad_extent(float(np.min(y)), float(np.max(y)))
    tf = PlotTransform(x0=x0, x1=x1, y0=y0, y1=y1, left=left,
                       right=width - right_pad, top=top,
                       bottom=height - bottom_pad)
    frame = np.array([[tf.left, tf.top], [tf.right, tf.top],
                      [tf.right, tf.bottom], [tf.left, tf.bottom],
                      [tf.left, tf.top]])
    prims: list = [PolylinePrim(points=frame,
                                style=Style(stroke="#333333",
                                            stroke_width=1.0))]
    if title:
        prims.append(TextPrim(xy=(width / 2.0, 16.0), text=title,
                              font_size=12.0, anchor="middle"))
    prims.append(TextPrim(xy=((tf.left + tf.right) / 2.0, height - 10.0),
                          text=x_label, font_size=11.0, anchor="middle"))
    prims.append(TextPrim(xy=(6.0, top - 8.0), text=y_label,
                          font_size=11.0, anchor="start"))
    prims.append(TextPrim(xy=(tf.left, height - 24.0),
                          text=f"{np.min(x):.6g}", font_size=9.0,
                          anchor="start"))
    prims.append(TextPrim(xy=(tf.right, height - 24.0),
                          text=f"{np.max(x):.6g}", font_size=9.0,
                          anchor="end"))
    prims.append(TextPrim(xy=(6.0, tf.bottom), text=f"{np.min(y):.6g}",
                          font_size=9.0, anchor="start"))
    prims.append(TextPrim(xy=(6.0, tf.top + 9.0), text=f"{np.max(y):.6g}",
                          font_size=9.0, anchor="start"))
    return tf, prims


def _closed(points: np.ndarray) -> np.ndarray:
    return np.vstack([points, points[:1]])


def _group_colors(groups) -> dict[str, str]:
    labels = sorted(set(str(g) for g in groups))
    return {lab: GROUP_PALETTE[i % len(GROUP_PALETTE)]
            for i, lab in enumerate(labels)}


def scatter_overlay(x: np.ndarray, y: np.ndarray, groups=None,
                    point_texts=None, fallback_texts=None,
                    pooled_levels: tuple[float, ...] = (0.68,),
                    group_level: float | None = None,
                    loess_span: float | None = None,
                    label_outside: float | None = None,
                    crosses: bool = False, hlines: tuple[float, ...] = (),
                    width: float = 480.0,
                    height: float = 480.0, x_label: str = "x",
                    y_label: str = "y", title: str | None = None) -> Scene:
    """Scatterplot with data ellipses, optional loess curve, per-group
    standard-error crosses, dashed horizontal reference lines, and greedy
    labels for points outside the label_outside coverage ellipse of the
    pooled sample."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape:
        raise NumericError("x and y lengths differ")
    pts = np.column_stack([xv, yv])
    notes: list[str] = []
    tf, prims = plot_frame(xv, yv, width, height, x_label, y_label, title)
    for hv in hlines:
        seg = tf(np.array([[tf.x0, hv], [tf.x1, hv]]))
        prims.append(PolylinePrim(points=seg, style=Style(
            stroke="#555555", stroke_width=1.0, dash=(5.0, 4.0))))

    color_by_group = _group_colors(groups) if groups is not None else {}
    labels_g = [str(g) for g in groups] if groups is not None else None

    for level in pooled_levels:
        ell = data_ellipse(pts, level)
        if ell.degenerate:
            notes.append(f"pooled ellipse at {level} degenerate")
        prims.append(PolylinePrim(
            points=tf(_closed(ell.boundary())),
            style=Style(stroke="#2166AC", stroke_width=1.2)))

    if labels_g is not None:
        for lab in sorted(set(labels_g)):
            idx = [i for i, g in enumerate(labels_g) if g == lab]
            gp = pts[idx]
            col = color_by_group[lab]
            if group_level is not None and len(idx) >= 3:
                ell = data_ellipse(gp, group_level)
                if ell.degenerate:
                    notes.append(f"group {lab} ellipse degenerate")
                else:
                    prims.append(PolylinePrim(
                        points=tf(_closed(ell.boundary())),
                        style=Style(stroke=col, stroke_width=1.2)))
            elif group_level is not None:
                notes.append(f"group {lab}: {len(idx)} member(s), "
                             "ellipse skipped")
            if crosses:
                center = gp.mean(axis=0)
                c_dev = tf(center)[0]
                if len(idx) >= 2:
                    se = gp.std(axis=0, ddof=1) / math.sqrt(len(idx))
                    ex = tf(np.array([[center[0] - se[0], center[1]],
                                      [center[0] + se[0], center[1]]]))
                    ey = tf(np.array([[center[0], center[1] - se[1]],
                                      [center[0], center[1] + se[1]]]))
                    prims.append(PolylinePrim(points=ex, style=Style(
                        stroke=col, stroke_width=2.0)))
                    prims.append(PolylinePrim(points=ey, style=Style(
                        stroke=col, stroke_width=2.0)))
                else:
                    prims.append(MarkerPrim(
                        xy=(float(c_dev[0]), float(c_dev[1])), kind="cross",
                        size=4.0, style=Style(stroke=col, stroke_width=2.0)))
                    notes.append(f"group {lab}: single member, "
                                 "centroid marker only")

    if loess_span is not None:
        fit = loess(xv, yv, span=loess_span, degree=1)
        order = np.argsort(xv, kind="stable")
        curve = np.column_stack([xv[order], fit.fitted[order]])
        prims.append(PolylinePrim(points=tf(curve),
                                  style=Style(stroke="#B2182B",
                                              stroke_width=1.6)))

    dev = tf(pts)
    for i in range(len(pts)):
        col = (color_by_group[labels_g[i]] if labels_g is not None
               else "#333333")
        prims.append(MarkerPrim(xy=(float(dev[i, 0]), float(dev[i, 1])),
                                kind="circle", size=2.5,
                                style=Style(fill=col)))

    if label_outside is not None and point_texts is not None:
        out_idx = outside_ellipse(pts, label_outside)
        if len(out_idx):
            center = pts.mean(axis=0)
            cov = np.cov(pts.T, ddof=1)
            pri = np.array([mahalanobis_sq(pts[i], center, cov)
                            for i in out_idx])
            fb = ([str(fallback_texts[i]) for i in out_idx]
                  if fallback_texts is not None else None)
            result = place_labels(
                dev[out_idx], [str(point_texts[i]) for i in out_idx],
                priorities=pri, fallback_texts=fb, font_size=9.0,
                marker_radius=3.5)
            for pl in result.placed:
                prims.append(TextPrim(
                    xy=(pl.box[0], pl.box[3] - 2.0), text=pl.text,
                    font_size=9.0, anchor="start"))
            for i in result.dropped:
                notes.append(
                    f"label dropped: {point_texts[out_idx[i]]}")
    return Scene(width=width, height=height, layers=tuple(prims),
                 notes=tuple(notes))


def scatterplot_matrix(data: np.ndarray, variable_names,
                       span: float = 2.0 / 3.0, width: float = 780.0,
                       height: float = 780.0) -> Scene:
    """p x p panel grid; panel (i, j) plots variable i (vertical) against
    variable j (horizontal) with a 68% ellipse and a loess curve."""
    arr = np.asarray(data, dtype=float)
    names = [str(v) for v in variable_names]
    p = len(names)
    if p < 2 or arr.shape[1] != p:
        raise NumericError("scatterplot_matrix needs >= 2 variables")
    margin = 4.0
    cell_w = (width - margin * (p + 1)) / p
    cell_h = (height - margin * (p + 1)) / p
    prims: list = []
    notes: list[str] = []
    for i in range(p):
        for j in range(p):
            ox = margin + j * (cell_w + margin)
            oy = margin + i * (cell_h + margin)
            box = np.array([[ox, oy], [ox + cell_w, oy],
                            [ox + cell_w, oy + cell_h], [ox, oy + cell_h],
                            [ox, oy]])
            prims.append(PolylinePrim(points=box, style=Style(
                stroke="#555555", stroke_width=0.8)))
            if i == j:
                prims.append(TextPrim(
                    xy=(ox + cell_w / 2.0, oy + cell_h / 2.0 + 4.0),
                    text=names[i], font_size=11.0, anchor="middle"))
                continue
            xv, yv = arr[:, j], arr[:, i]
            x0, x1 = pad_extent(float(xv.min()), float(xv.max()))
            y0, y1 = pad_extent(float(yv.min()), float(yv.max()))
            tf = PlotTransform(x0=x0, x1=x1, y0=y0, y1=y1, left=ox + 2.0,
                               right=ox + cell_w - 2.0, top=oy + 2.0,
                               bottom=oy + cell_h - 2.0)
            ell = data_ellipse(np.column_stack([xv, yv]), 0.68)
            if ell.degenerate:
                notes.append(f"panel ({i},{j}) ellipse degenerate")
            else:
                prims.append(PolylinePrim(points=tf(_closed(ell.boundary())),
                                          style=Style(stroke="#2166AC",
                                                      stroke_width=0.9)))
            fit = loess(xv, yv, span=span, degree=1)
            order = np.argsort(xv, kind="stable")
            prims.append(PolylinePrim(
                points=tf(np.column_stack([xv[order], fit.fitted[order]])),
                style=Style(stroke="#B2182B", stroke_width=1.1)))
            dev = tf(np.column_stack([xv, yv]))
            for k in range(len(xv)):
                prims.append(MarkerPrim(
                    xy=(float(dev[k, 0]), float(dev[k, 1])), kind="circle",
                    size=1.4, style=Style(fill="#333333")))
    return Scene(width=width, height=height, layers=tuple(prims),
                 notes=tuple(notes))


def discordant_pairs(rank_a: np.ndarray, rank_b: np.ndarray) -> int:
    """Number of pairs ordered oppositely by the two rankings; equals the
    segment crossing count of the parallel-ranks display."""
    a = np.asarray(rank_a, dtype=float)
    b = np.asarray(rank_b, dtype=float)
    count = 0
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if (a[i] - a[j]) * (b[i] - b[j]) < 0:
                count += 1
    return count


def parallel_ranks(rank_a: np.ndarray, rank_b: np.ndarray,
                   names: tuple[str, str] = ("a", "b"),
                   width: float = 300.0, height: float = 560.0) -> Scene:
    """Two vertical rank axes (1 at top) with one connecting segment per
    observation."""
    a = np.asarray(rank_a, dtype=float)
    b = np.asarray(rank_b, dtype=float)
    if a.shape != b.shape:
        raise DataError("parallel_ranks: mismatched rank vectors")
    n = len(a)
    top, bottom = 36.0, height - 24.0
    left, right = 40.0, width - 40.0

    def ypos(rank: float) -> float:
        if n == 1:
            return (top + bottom) / 2.0
        return top + (rank - 1.0) / (n - 1.0) * (bottom - top)

    prims: list = [
        PolylinePrim(points=np.array([[left, top], [left, bottom]]),
                     style=Style(stroke="#333333", stroke_width=1.0)),
        PolylinePrim(points=np.array([[right, top], [right, bottom]]),
                     style=Style(stroke="#333333", stroke_width=1.0)),
        TextPrim(xy=(left, top - 12.0), text=names[0], font_size=11.0,
                 anchor="middle"),
        TextPrim(xy=(right, top - 12.0), text=names[1], font_size=11.0,
                 anchor="middle"),
        TextPrim(xy=(left - 6.0, ypos(1.0) + 3.0), text="1", font_size=9.0,
                 anchor="end"),
        TextPrim(xy=(left - 6.0, ypos(float(n)) + 3.0), text=str(n),
                 font_size=9.0, anchor="end"),
    ]
    for i in range(n):
        seg = np.array([[left, ypos(a[i])], [right, ypos(b[i])]])
        prims.append(PolylinePrim(points=seg, style=Style(
            stroke="#555555", stroke_width=0.7)))
    return Scene(width=width, height=height, layers=tuple(prims))


def effect_order(biplot: BiplotGeometry) -> tuple[str, ...]:
    """Variables sorted by the counterclockwise angle of their biplot
    vectors, starting at 0; ties broken by name."""
    vecs = biplot.vector_coords
    if vecs.shape[0] < 1:
        raise NumericError("effect_order needs >= 1 variable vector")
    angles = np.mod(np.arctan2(vecs[:, 1], vecs[:, 0]), 2.0 * np.pi)
    order = sorted(range(len(angles)),
                   key=lambda i: (angles[i], biplot.variable_names[i]))
    return tuple(biplot.variable_names[i] for i in order)


# ---------------------------------------------------------------------------
# star glyphs

MIN_RAY = 0.05


@dataclass(frozen=True)
class GlyphSpec:
    """Star glyph: one ray per variable, equally spaced starting at 90
    degrees counterclockwise, lengths as fractions of the radius."""

    ray_fractions: tuple[float, ...]
    angular_order: tuple[str, ...]
    fill: str | None = "#CCCCCC"
    outline: str | None = "#333333"

    def __post_init__(self) -> None:
        if len(self.ray_fractions) != len(self.angular_order):
            raise NumericError("ray_fractions and angular_order lengths differ")


def star_glyph(values, order, fill: str | None = "#CCCCCC",
               outline: str | None = "#333333") -> GlyphSpec:
    """Build a glyph from values already scaled to [0, 1] (1 = best).

    Rays shorter than 0.05 of the radius are lifted to that floor so zero
    values stay visible."""
    vals = [float(v) for v in values]
    if not vals:
        raise DataError("star_glyph needs at least one variable")
    for v in vals:
        if not 0.0 <= v <= 1.0:
            raise DataError(f"ray value {v} outside [0, 1]")
    fractions = tuple(max(v, MIN_RAY) for v in vals)
    return GlyphSpec(ray_fractions=fractions,
                     angular_order=tuple(str(o) for o in order),
                     fill=fill, outline=outline)


def glyph_polygon(spec: GlyphSpec, center: tuple[float, float],
                  radius: float) -> np.ndarray:
    """Closed device-coordinate ring through the ray endpoints (y grows
    downward, angles counterclockwise in data orientation)."""
    p = len(spec.ray_fractions)
    cx, cy = center
    pts = []
    for i, frac in enumerate(spec.ray_fractions):
        theta = math.pi / 2.0 + 2.0 * math.pi * i / p
        pts.append([cx + radius * frac * math.cos(theta),
                    cy - radius * frac * math.sin(theta)])
    pts.append(pts[0])
    return np.array(pts)


def ray_fractions(ranks: np.ndarray, n: int) -> np.ndarray:
    """Scale ranks (1 = best) to (0, 1] with best mapping to 1."""
    r = np.asarray(ranks, dtype=float)
    return (n + 1.0 - r) / n


def _best_rank(ds: MoralDataset, variable: str) -> np.ndarray:
    """Ranks with 1 = best for the variable's direction."""
    vals = ds.column(variable)
    better = ds.meta(variable).more_is_better
    return rank_transform(vals, "highest" if better else "lowest")


def star_map(basemap: BaseMap, ds: MoralDataset, variables,
             encoding: str = "individual", color_encode: str = "none",
             annotate_unusual: bool = False, width: float = 520.0,
             height: float = 560.0, title: str | None = None) -> Scene:
    """Star glyphs over the base map.

    individual: one glyph per feature at its label point, rays scaled by
    rank (longer = better). region_quartiles: per region, three overlaid
    stars (upper quartile beneath in grey, median filled, lower quartile
    in white on top); regions with under 4 members fall back to the median
    star alone. color_encode shades individual glyphs by the mean or the
    standard deviation of each feature's ranks through the sequential
    ramp; annotate_unusual labels features outside the 1.5 IQR fences of
    the encoded statistic with their code number.
    """
    if encoding not in ("individual", "region_quartiles"):
        raise DataError(f"unknown encoding {encoding!r}")
    if color_encode not in ("none", "mean_rank", "sd_rank"):
        raise DataError(f"unknown color_encode {color_encode!r}")
    bm = basemap.ordered()
    od = ds.ordered()
    variables = [str(v) for v in variables]
    n = od.n
    rank_cols = np.column_stack([_best_rank(od, v) for v in variables])
    frac_cols = np.column_stack(
        [ray_fractions(rank_cols[:, j], n) for j in range(len(variables))])
    codes = list(od.codes())
    code_to_row = {c: i for i, c in enumerate(codes)}

    notes: list[str] = []
    tf = map_transform(bm.bounds(), width, height - 24.0, margin=14.0)
    prims: list = []
    if title:
        prims.append(TextPrim(xy=(width / 2.0, 16.0), text=title,
                              font_size=13.0, anchor="middle"))
    base = _feature_polygons(bm, tf, {c: "#FFFFFF" for c in bm.codes()},
                             stroke="#BBBBBB", stroke_width=0.5)
    prims.extend(translate(p, 0.0, 24.0) for p in base)

    anchors = {}
    for feat in bm.features:
        pt = tf(label_point(feat))[0]
        anchors[feat.code] = np.array([pt[0], pt[1] + 24.0])
    for c in codes:
        if c not in anchors:
            notes.append(f"code {c} has no map feature")

    if encoding == "individual":
        radius = 0.017 * min(width, height)
        mean_ranks = rank_cols.mean(axis=1)
        sd_ranks = rank_cols.std(axis=1, ddof=1)
        encoded = (mean_ranks if color_encode == "mean_rank" else
                   sd_ranks if color_encode == "sd_rank" else None)
        if encoded is not None:
            lo, hi = float(encoded.min()), float(encoded.max())
            span = hi - lo if hi > lo else 1.0
        for c in codes:
            if c not in anchors:
                continue
            i = code_to_row[c]
            if encoded is not None:
                fill = sequential_ramp((encoded[i] - lo) / span).hex
            else:
                fill = "#CCCCCC"
            spec = star_glyph(frac_cols[i], variables, fill=fill)
            ring = glyph_polygon(spec, tuple(anchors[c]), radius)
            prims.append(PolygonPrim(rings=(ring,), style=Style(
                fill=fill, stroke="#333333", stroke_width=0.6),
                feature_id=c))
        if annotate_unusual and encoded is not None:
            out_idx, lo_f, hi_f = boxplot_outside(encoded)
            flagged = [codes[i] for i in out_idx if codes[i] in anchors]
            notes.append("unusual codes: "
                         + ", ".join(str(c) for c in flagged))
            if flagged:
                pts = np.array([anchors[c] for c in flagged])
                pri = np.abs(np.array(
                    [encoded[code_to_row[c]] for c in flagged]))
                res = place_labels(pts, [str(c) for c in flagged],
                                   priorities=pri, font_size=10.0,
                                   marker_radius=radius)
                for pl in res.placed:
                    prims.append(TextPrim(xy=(pl.box[0], pl.box[3] - 2.0),
                                          text=pl.text, font_size=10.0,
                                          anchor="start",
                                          style=Style(fill="#B2182B")))
                for i in res.dropped:
                    notes.append(f"label dropped: {flagged[i]}")
    else:
        radius = 0.055 * min(width, height)
        regions = sorted(set(od.regions()))
        for reg in regions:
            member_rows = [i for i, r in enumerate(od.regions()) if r == reg]
            member_pts = [anchors[codes[i]] for i in member_rows
                          if codes[i] in anchors]
            if not member_pts:
                continue
            center = tuple(np.mean(member_pts, axis=0))
            fr = frac_cols[member_rows]
            if len(member_rows) >= 4:
                q1, q2, q3 = (np.percentile(fr, p, axis=0)
                              for p in (25.0, 50.0, 75.0))
                layers = [(q3, "#BBBBBB"), (q2, "#4477AA"),
                          (q1, "#FFFFFF")]
            else:
                notes.append(f"region {reg}: {len(member_rows)} member(s), "
                             "median star only")
                layers = [(np.percentile(fr, 50.0, axis=0), "#4477AA")]
            for vals, fill in layers:
                spec = star_glyph(np.clip(vals, 0.0, 1.0), variables,
                                  fill=fill)
                ring = glyph_polygon(spec, center, radius)
                prims.append(PolygonPrim(rings=(ring,), style=Style(
                    fill=fill, stroke="#333333", stroke_width=0.8)))
            prims.append(TextPrim(xy=(center[0], center[1] + radius + 12.0),
                                  text=reg, font_size=11.0, anchor="middle"))
    return Scene(width=width, height=height, layers=tuple(prims),
                 notes=tuple(notes))


# ---------------------------------------------------------------------------
# color-blend maps

def normalize_minmax(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    lo, hi = float(v.min()), float(v.max())
    if hi <= lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def relative_blend(a: float, b: float, c: float) -> ColorRGB:
    """Color from relative channel amounts: invariant under scaling all
    three by a positive constant."""
    s = a + b + c
    if s <= 0:
        return ColorRGB(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    return ColorRGB(a / s, b / s, c / s)


def trilinear_legend(channel_names: tuple[str, str, str],
                     side: float = 220.0, steps: int = 32) -> Scene:
    """Barycentric triangle sampled on a step-1/steps grid; each cell is
    colored by the relative amounts of the three channels at its
    centroid. Vertex order: first name at top (red), second lower left
    (green), third lower right (blue)."""
    if len(channel_names) != 3:
        raise DataError("trilinear_legend needs exactly 3 channels")
    margin = 26.0
    h = (side - 2 * margin) * math.sqrt(3.0) / 2.0
    v_r = np.array([side / 2.0, margin])
    v_g = np.array([margin, margin + h])
    v_b = np.array([side - margin, margin + h])

    def cart(bary: np.ndarray) -> np.ndarray:
        return bary[0] * v_r + bary[1] * v_g + bary[2] * v_b

    prims: list = []
    m = steps
    for i in range(m):
        for j in range(m - i):
            k = m - i - j
            c0 = np.array([i, j, k - 1], dtype=float)
            up = [c0 + [1, 0, 0], c0 + [0, 1, 0], c0 + [0, 0, 1]]
            cells = [up]
            if k >= 2:
                down = [c0 + [1, 0, 0], c0 + [0, 1, 0],
                        c0 + [1, 1, -1]]
                cells.append(down)
            for corners in cells:
                bary = np.mean(corners, axis=0) / m
                col = relative_blend(bary[0], bary[1], bary[2])
                ring = np.array([cart(np.asarray(c) / m) for c in corners]
                                + [cart(np.asarray(corners[0]) / m)])
                prims.append(PolygonPrim(rings=(ring,), style=Style(
                    fill=col.hex, stroke=col.hex, stroke_width=0.3)))
    prims.append(TextPrim(xy=(float(v_r[0]), float(v_r[1]) - 8.0),
                          text=str(channel_names[0]), font_size=10.0,
                          anchor="middle"))
    prims.append(TextPrim(xy=(float(v_g[0]), float(v_g[1]) + 14.0),
                          text=str(channel_names[1]), font_size=10.0,
                          anchor="middle"))
    prims.append(TextPrim(xy=(float(v_b[0]), float(v_b[1]) + 14.0),
                          text=str(channel_names[2]), font_size=10.0,
                          anchor="middle"))
    return Scene(width=side, height=side, layers=tuple(prims))


def factor_rgb_map(basemap: BaseMap, codes, triples: np.ndarray,
                   outlier_codes=(), permutation: tuple[int, int, int]
                   = (0, 1, 2), width: float = 520.0,
                   height: float = 560.0, title: str | None = None) -> Scene:
    """Choropleth filled by the RGB blend of three normalized values per
    feature; listed outliers get a ring marker and a code-number label."""
    arr = np.asarray(triples, dtype=float)
    codes = [int(c) for c in codes]
    if arr.shape != (len(codes), 3):
        raise DataError("triples must be (n, 3) aligned with codes")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DataError("triples must be normalized to [0, 1]")
    bm = basemap.ordered()
    value_by_code = {c: arr[i] for i, c in enumerate(codes)}
    notes: list[str] = []
    fills: dict[int, str | None] = {}
    for feat in bm.features:
        v = value_by_code.get(feat.code)
        if v is None:
            fills[feat.code] = None
            notes.append(f"code {feat.code} has no value; drawn hollow")
        else:
            fills[feat.code] = rgb_blend(v[0], v[1], v[2],
                                         permutation).hex
    for c in sorted(value_by_code):
        if c not in set(bm.codes()):
            notes.append(f"code {c} has no map feature")

    tf = map_transform(bm.bounds(), width, height - 24.0, margin=12.0)
    prims: list = []
    if title:
        prims.append(TextPrim(xy=(width / 2.0, 16.0), text=title,
                              font_size=13.0, anchor="middle"))
    body = _feature_polygons(bm, tf, fills)
    prims.extend(translate(p, 0.0, 24.0) for p in body)

    flagged = [c for c in outlier_codes if c in set(bm.codes())]
    if flagged:
        anchors = []
        for c in flagged:
            pt = tf(label_point(bm.feature_by_code(c)))[0]
            anchors.append([pt[0], pt[1] + 24.0])
            prims.append(MarkerPrim(xy=(float(pt[0]), float(pt[1]) + 24.0),
                                    kind="circle", size=7.0,
                                    style=Style(fill=None, stroke="#000000",
                                                stroke_width=1.4),
                                    feature_id=c))
        res = place_labels(np.array(anchors), [str(c) for c in flagged],
                           font_size=10.0, marker_radius=8.0)
        for pl in res.placed:
            prims.append(TextPrim(xy=(pl.box[0], pl.box[3] - 2.0),
                                  text=pl.text, font_size=10.0,
                                  anchor="start"))
        for i in res.dropped:
            notes.append(f"label dropped: {flagged[i]}")
    return Scene(width=width, height=height, layers=tuple(prims),
                 notes=tuple(notes))


# ---------------------------------------------------------------------------
# shingles, diverging scale, conditioned choropleth maps

@dataclass(frozen=True)
class Shingle:
    """Closed value interval with the indices of its members."""

    lower: float
    upper: float
    member_indices: tuple[int, ...]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def equal_count_shingles(values: np.ndarray, k: int,
                         overlap: float) -> list[Shingle]:
    """Equal-count intervals over sorted values.

    Target count per shingle r = n / (k (1 - overlap) + overlap);
    consecutive windows advance by r (1 - overlap) with index boundaries
    rounded half up. Every observation lands in at least one shingle.
    """
    v = np.asarray(values, dtype=float)
    n = len(v)
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    if not 0.0 <= overlap < 1.0:
        raise DataError(f"overlap must lie in [0, 1), got {overlap}")
    if n < k:
        raise DataError(f"need n >= k, got n = {n}, k = {k}")
    r = n / (k * (1.0 - overlap) + overlap)
    if r < 1.0:
        raise DataError(
            f"infeasible shingles: target count {r:.3f} below 1")
    order = np.argsort(v, kind="stable")
    advance = r * (1.0 - overlap)
    shingles = []
    for i in range(k):
        start = _round_half_up(i * advance)
        end = min(_round_half_up(i * advance + r), n)
        members = order[start:end]
        vals = v[members]
        shingles.append(Shingle(
            lower=float(vals.min()), upper=float(vals.max()),
            member_indices=tuple(sorted(int(m) for m in members))))
    return shingles


@dataclass(frozen=True)
class DivergingScale:
    """Global 8-class diverging scale: classes, cut points, palette."""

    classes: np.ndarray
    cuts: np.ndarray
    palette: tuple[str, ...]
    rates: np.ndarray

    def color(self, index: int) -> str:
        return self.palette[int(self.classes[index]) - 1]


def diverging_percentile_scale(values: np.ndarray,
                               reciprocal: bool = False) -> DivergingScale:
    """Classes 1..8 from cuts at the 20th..80th percentiles (step 10) of
    the complete distribution.

    With reciprocal, classing runs on 1/value so that the high end of the
    event rate (small population-per-event) lands in the red classes.
    Ties sit in the lower class (value <= cut stays below).
    """
    v = np.asarray(values, dtype=float)
    if reciprocal:
        if np.any(v == 0.0):
            raise DataError("reciprocal scale hit a zero value")
        rates = 1.0 / v
    else:
        rates = v.copy()
    if len(np.unique(rates)) < 2:
        raise DataError("diverging scale needs >= 2 distinct values")
    cuts = np.percentile(rates, np.arange(20.0, 81.0, 10.0))
    classes = 1 + np.sum(rates[:, None] > cuts[None, :], axis=1)
    return DivergingScale(classes=classes.astype(int), cuts=cuts,
                          palette=DIVERGING8, rates=rates)


@dataclass(frozen=True)
class CcmapPanel:
    x_index: int
    y_index: int
    member_codes: tuple[int, ...]
    count: int
    median_response: float | None


@dataclass(frozen=True)
class CcmapResult:
    scene: Scene
    panels: tuple[CcmapPanel, ...]
    shingles_x: tuple[Shingle, ...]
    shingles_y: tuple[Shingle, ...]
    scale: DivergingScale
    codes: tuple[int, ...]


def ccmap(basemap: BaseMap, codes, response: np.ndarray,
          given_x: np.ndarray, given_y: np.ndarray, k_x: int = 2,
          k_y: int = 2, overlap: float = 0.10,
          response_reciprocal: bool = False,
          names: tuple[str, str, str] = ("response", "x", "y"),
          y_low_first_on_top: bool = False, width: float = 760.0,
          height: float = 820.0) -> CcmapResult:
    """Conditioned choropleth grid.

    Panel (i, j) shades only the members of x-shingle i intersected with
    y-shingle j, using the global diverging scale of the response; other
    features stay neutral. Panels are annotated top-left with the median
    response (original units) and member count; yellow marginal bars show
    the percent of features in each shingle. y_low_first_on_top puts the
    first y shingle (lowest values) in the top row, for rank-style
    variables where value 1 is the maximum.
    """
    codes = [int(c) for c in codes]
    resp = np.asarray(response, dtype=float)
    gx = np.asarray(given_x, dtype=float)
    gy = np.asarray(given_y, dtype=float)
    n = len(codes)
    if not (len(resp) == len(gx) == len(gy) == n):
        raise DataError("ccmap inputs must align with codes")
    bm = basemap.ordered()
    mapped = set(bm.codes())
    for c in codes:
        if c not in mapped:
            raise DataError(f"code {c} has no map feature")

    scale = diverging_percentile_scale(resp, reciprocal=response_reciprocal)
    sh_x = equal_count_shingles(gx, k_x, overlap)
    sh_y = equal_count_shingles(gy, k_y, overlap)

    margin = 8.0
    bar = 14.0
    title_h = 26.0
    cell_w = (width - bar - margin * (k_x + 1)) / k_x
    cell_h = (height - bar - title_h - margin * (k_y + 1)) / k_y
    tf = map_transform(bm.bounds(), cell_w, cell_h - 26.0, margin=4.0)

    prims: list = [TextPrim(
        xy=(width / 2.0, 17.0),
        text=f"{names[0]} | {names[1]} x {names[2]}", font_size=12.0,
        anchor="middle")]
    notes: list[str] = []
    panels = []
    rows = list(range(k_y))
    if not y_low_first_on_top:
        rows.reverse()  # low y shingle at the bottom row
    for grid_row, j in enumerate(rows):
        for i in range(k_x):
            members = sorted(set(sh_x[i].member_indices)
                             & set(sh_y[j].member_indices))
            member_codes = tuple(codes[m] for m in members)
            median = (float(np.median(resp[list(members)]))
                      if members else None)
            panels.append(CcmapPanel(
                x_index=i, y_index=j, member_codes=member_codes,
                count=len(members),
                median_response=median))
            ox = bar + margin + i * (cell_w + margin)
            oy = title_h + margin + grid_row * (cell_h + margin)
            member_set = set(member_codes)
            fills = {}
            for idx, c in enumerate(codes):
                fills[c] = (scale.color(idx) if c in member_set
                            else NEUTRAL)
            body = _feature_polygons(bm, tf, fills, stroke="#999999",
                                     stroke_width=0.4)
            prims.extend(translate(p, ox, oy + 26.0) for p in body)
            box = np.array([[ox, oy], [ox + cell_w, oy],
                            [ox + cell_w, oy + cell_h],
                            [ox, oy + cell_h], [ox, oy]])
            prims.append(PolylinePrim(points=box, style=Style(
                stroke="#444444", stroke_width=0.8)))
            if median is not None:
                prims.append(TextPrim(xy=(ox + 6.0, oy + 13.0),
                                      text=f"{median:.6g}", font_size=10.0,
                                      anchor="start"))
            prims.append(TextPrim(xy=(ox + 6.0, oy + 24.0),
                                  text=f"n={len(members)}", font_size=10.0,
                                  anchor="start"))

    # marginal bars: percent of features per shingle
    for i in range(k_x):
        ox = bar + margin + i * (cell_w + margin)
        frac = len(sh_x[i].member_indices) / n
        y0 = height - bar + 3.0
        ring = np.array([[ox, y0], [ox + frac * cell_w, y0],
                         [ox + frac * cell_w, y0 + bar - 6.0],
                         [ox, y0 + bar - 6.0], [ox, y0]])
        prims.append(PolygonPrim(rings=(ring,), style=Style(
            fill=BAR_FILL, stroke="#888888", stroke_width=0.5)))
    for grid_row, j in enumerate(rows):
        oy = title_h + margin + grid_row * (cell_h + margin)
        frac = len(sh_y[j].member_indices) / n
        x0 = 3.0
        ring = np.array([[x0, oy], [x0 + bar - 6.0, oy],
                         [x0 + bar - 6.0, oy + frac * cell_h],
                         [x0, oy + frac * cell_h], [x0, oy]])
        prims.append(PolygonPrim(rings=(ring,), style=Style(
            fill=BAR_FILL, stroke="#888888", stroke_width=0.5)))

    scene = Scene(width=width, height=height, layers=tuple(prims),
                  notes=tuple(notes))
    return CcmapResult(scene=scene, panels=tuple(panels),
                       shingles_x=tuple(sh_x), shingles_y=tuple(sh_y),
                       scale=scale, codes=tuple(codes))


def fitted_residual_maps(basemap: BaseMap, codes, fitted: np.ndarray,
                         residuals: np.ndarray, outside_codes=(),
                         names_by_code: dict[int, str] | None = None,
                         width: float = 520.0, height: float = 560.0,
                         titles: tuple[str, str] = ("Fitted", "Residuals")
                         ) -> tuple[Scene, Scene]:
    """Fitted map on the sequential ramp; residual map on the diverging
    palette with symmetric bins around zero; boxplot-outside features
    labeled by name on the residual map."""
    codes = [int(c) for c in codes]
    fit = np.asarray(fitted, dtype=float)
    res = np.asarray(residuals, dtype=float)
    if not (len(fit) == len(res) == len(codes)):
        raise DataError("fitted/residual vectors must align with codes")
    bm = basemap.ordered()

    t = normalize_minmax(fit)
    fit_fills = {c: sequential_ramp(t[i]).hex for i, c in enumerate(codes)}
    m = float(np.max(np.abs(res)))
    if m == 0.0:
        res_fills = {c: NEUTRAL for c in codes}
    else:
        cuts = np.array([-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75]) * m
        cls = 1 + np.sum(res[:, None] > cuts[None, :], axis=1)
        res_fills = {c: DIVERGING8[cls[i] - 1] for i, c in enumerate(codes)}

    scenes = []
    for which, (fills, title) in enumerate(((fit_fills, titles[0]),
                                            (res_fills, titles[1]))):
        tf = map_transform(bm.bounds(), width, height - 24.0, margin=12.0)
        notes = []
        all_fills: dict[int, str | None] = {}
        for feat in bm.features:
            if feat.code in fills:
                all_fills[feat.code] = fills[feat.code]
            else:
                all_fills[feat.code] = None
                notes.append(f"code {feat.code} has no value; drawn hollow")
        prims: list = [TextPrim(xy=(width / 2.0, 16.0), text=title,
                                font_size=13.0, anchor="middle")]
        body = _feature_polygons(bm, tf, all_fills)
        prims.extend(translate(p, 0.0, 24.0) for p in body)
        if which == 1 and outside_codes:
            flagged = [c for c in outside_codes if c in set(bm.codes())]
            anchors = []
            texts = []
            for c in flagged:
                pt = tf(label_point(bm.feature_by_code(c)))[0]
                anchors.append([pt[0], pt[1] + 24.0])
                texts.append(names_by_code.get(c, str(c))
                             if names_by_code else str(c))
            if flagged:
                pri = np.abs(np.array(
                    [res[codes.index(c)] for c in flagged]))
                placed = place_labels(np.array(anchors), texts,
                                      priorities=pri,
                                      fallback_texts=[str(c)
                                                      for c in flagged],
                                      font_size=9.0, marker_radius=2.0)
                for pl in placed.placed:
                    prims.append(TextPrim(xy=(pl.box[0], pl.box[3] - 2.0),
                                          text=pl.text, font_size=9.0,
                                          anchor="start"))
                for i in placed.dropped:
                    notes.append(f"label dropped: {texts[i]}")
        scenes.append(Scene(width=width, height=height,
                            layers=tuple(prims), notes=tuple(notes)))
    return scenes[0], scenes[1]
