"""Device-independent scenes and their deterministic serializations.

A Scene is an ordered list of primitives (polygon, polyline, marker, text,
legend). Rendering is a pure function of the scene value: coordinates are
formatted to exactly 6 decimals, colors to #RRGGBB, so identical scenes
give byte-identical SVG and JSON.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericError

FONT_FAMILY = "monospace"


def fmt6(x: float) -> str:
    """Fixed 6-decimal format; negative zero normalized; finite only."""
    v = float(x)
    if not math.isfinite(v):
        raise NumericError(f"non-finite coordinate: {v}")
    s = f"{v:.6f}"
    if s == "-0.000000":
        s = "0.000000"
    return s


@dataclass(frozen=True)
class Style:
    fill: str | None = None
    stroke: str | None = None
    stroke_width: float = 1.0
    opacity: float = 1.0
    dash: tuple[float, ...] | None = None


@dataclass(frozen=True)
class PolygonPrim:
    """Filled region; rings beyond the first cut holes (evenodd rule)."""

    rings: tuple[np.ndarray, ...]
    style: Style
    feature_id: int | None = None


@dataclass(frozen=True)
class PolylinePrim:
    points: np.ndarray
    style: Style
    feature_id: int | None = None


@dataclass(frozen=True)
class MarkerPrim:
    xy: tuple[float, float]
    kind: str  # circle, cross, square
    size: float
    style: Style
    feature_id: int | None = None


@dataclass(frozen=True)
class TextPrim:
    xy: tuple[float, float]
    text: str
    font_size: float
    anchor: str = "start"  # start, middle, end
    style: Style = field(default_factory=lambda: Style(fill="#000000"))
    feature_id: int | None = None


@dataclass(frozen=True)
class LegendPrim:
    """Vertical list of swatch + label rows starting at xy."""

    xy: tuple[float, float]
    entries: tuple[tuple[str, str], ...]  # (label, fill hex)
    font_size: float = 10.0
    swatch: float = 12.0


Primitive = PolygonPrim | PolylinePrim | MarkerPrim | TextPrim | LegendPrim


@dataclass(frozen=True)
class Scene:
    width: float
    height: float
    layers: tuple[Primitive, ...]
    notes: tuple[str, ...] = ()


def translate(prim: Primitive, dx: float, dy: float) -> Primitive:
    """Shift a primitive; used to compose panel grids."""
    off = np.array([dx, dy])
    if isinstance(prim, PolygonPrim):
        return replace(prim, rings=tuple(r + off for r in prim.rings))
    if isinstance(prim, PolylinePrim):
        return replace(prim, points=prim.points + off)
    if isinstance(prim, (MarkerPrim, TextPrim, LegendPrim)):
        x, y = prim.xy
        return replace(prim, xy=(x + dx, y + dy))
    raise NumericError(f"unknown primitive {type(prim).__name__}")


def compose_row(scenes, gap: float = 12.0) -> Scene:
    """Place scenes left to right on a shared canvas."""
    scenes = list(scenes)
    if not scenes:
        raise NumericError("compose_row needs at least one scene")
    width = sum(s.width for s in scenes) + gap * (len(scenes) - 1)
    height = max(s.height for s in scenes)
    layers: list[Primitive] = []
    notes: list[str] = []
    dx = 0.0
    for s in scenes:
        layers.extend(translate(p, dx, 0.0) for p in s.layers)
        notes.extend(s.notes)
        dx += s.width + gap
    return Scene(width=width, height=height, layers=tuple(layers),
                 notes=tuple(notes))


def compose_grid(rows, gap: float = 12.0) -> Scene:
    """Stack rows of scenes top to bottom, each row left-aligned."""
    rows = [list(r) for r in rows]
    if not rows or not any(rows):
        raise NumericError("compose_grid needs at least one scene")
    row_scenes = [compose_row(r, gap=gap) for r in rows if r]
    width = max(s.width for s in row_scenes)
    height = sum(s.height for s in row_scenes) + gap * (len(row_scenes) - 1)
    layers: list[Primitive] = []
    notes: list[str] = []
    dy = 0.0
    for s in row_scenes:
        layers.extend(translate(p, 0.0, dy) for p in s.layers)
        notes.extend(s.notes)
        dy += s.height + gap
    return Scene(width=width, height=height, layers=tuple(layers),
                 notes=tuple(notes))


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))


def _style_attrs(style: Style, default_fill: str = "none") -> str:
    parts = [f'fill="{style.fill if style.fill is not None else default_fill}"']
    if style.stroke is not None:
        parts.append(f'stroke="{style.stroke}"')
        parts.append(f'stroke-width="{fmt6(style.stroke_width)}"')
    if style.opacity != 1.0:
        parts.append(f'opacity="{fmt6(style.opacity)}"')
    if style.dash is not None:
        dash = " ".join(fmt6(d) for d in style.dash)
        parts.append(f'stroke-dasharray="{dash}"')
    return " ".join(parts)


def _ring_path(ring: np.ndarray) -> str:
    pts = np.asarray(ring, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise NumericError("polygon ring must be an (m, 2) array, m >= 3")
    if not np.allclose(pts[0], pts[-1]):
        pts = np.vstack([pts, pts[0]])
    coords = [f"{fmt6(x)},{fmt6(y)}" for x, y in pts]
    return "M " + " L ".join(coords) + " Z"


def _render_primitive(prim: Primitive, out: list[str]) -> None:
    if isinstance(prim, PolygonPrim):
        d = " ".join(_ring_path(r) for r in prim.rings)
        out.append(f'<path d="{d}" fill-rule="evenodd" '
                   f'{_style_attrs(prim.style)}/>')
    elif isinstance(prim, PolylinePrim):
        pts = np.asarray(prim.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise NumericError("polyline must be an (m, 2) array, m >= 2")
        coords = " ".join(f"{fmt6(x)},{fmt6(y)}" for x, y in pts)
        out.append(f'<polyline points="{coords}" '
                   f'{_style_attrs(prim.style)}/>')
    elif isinstance(prim, MarkerPrim):
        x, y = prim.xy
        s = prim.size
        if prim.kind == "circle":
            out.append(f'<circle cx="{fmt6(x)}" cy="{fmt6(y)}" '
                       f'r="{fmt6(s)}" {_style_attrs(prim.style)}/>')
        elif prim.kind == "square":
            out.append(f'<rect x="{fmt6(x - s)}" y="{fmt6(y - s)}" '
                       f'width="{fmt6(2 * s)}" height="{fmt6(2 * s)}" '
                       f'{_style_attrs(prim.style)}/>')
        elif prim.kind == "cross":
            d = (f"M {fmt6(x - s)},{fmt6(y)} L {fmt6(x + s)},{fmt6(y)} "
                 f"M {fmt6(x)},{fmt6(y - s)} L {fmt6(x)},{fmt6(y + s)}")
            out.append(f'<path d="{d}" {_style_attrs(prim.style)}/>')
        else:
            raise NumericError(f"unknown marker kind {prim.kind!r}")
    elif isinstance(prim, TextPrim):
        x, y = prim.xy
        fill = prim.style.fill if prim.style.fill is not None else "#000000"
        out.append(f'<text x="{fmt6(x)}" y="{fmt6(y)}" '
                   f'font-family="{FONT_FAMILY}" '
                   f'font-size="{fmt6(prim.font_size)}" '
                   f'text-anchor="{prim.anchor}" fill="{fill}">'
                   f'{_escape(prim.text)}</text>')
    elif isinstance(prim, LegendPrim):
        x, y = prim.xy
        row_h = prim.font_size * 1.5
        for i, (label, fill) in enumerate(prim.entries):
            ry = y + i * row_h
            out.append(f'<rect x="{fmt6(x)}" y="{fmt6(ry)}" '
                       f'width="{fmt6(prim.swatch)}" '
                       f'height="{fmt6(prim.swatch)}" fill="{fill}" '
                       f'stroke="#444444" stroke-width="0.500000"/>')
            out.append(f'<text x="{fmt6(x + prim.swatch + 4.0)}" '
                       f'y="{fmt6(ry + prim.swatch - 2.0)}" '
                       f'font-family="{FONT_FAMILY}" '
                       f'font-size="{fmt6(prim.font_size)}" '
                       f'text-anchor="start" fill="#000000">'
                       f'{_escape(label)}</text>')
    else:
        raise NumericError(f"unknown primitive {type(prim).__name__}")


def render_svg(scene: Scene) -> bytes:
    """Standalone SVG 1.1 document; identical scenes give identical bytes."""
    w, h = fmt6(scene.width), fmt6(scene.height)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    for prim in scene.layers:
        _render_primitive(prim, out)
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _json_escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _dump(value, num, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, str):
        out.append(_json_escape(value))
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            raise NumericError(f"non-finite value in JSON output: {v}")
        out.append(num(v))
    elif isinstance(value, dict):
        out.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(_json_escape(str(k)))
            out.append(":")
            _dump(v, num, out)
        out.append("}")
    elif isinstance(value, (list, tuple, np.ndarray)):
        seq = value.tolist() if isinstance(value, np.ndarray) else value
        out.append("[")
        for i, v in enumerate(seq):
            if i:
                out.append(",")
            _dump(v, num, out)
        out.append("]")
    else:
        raise NumericError(
            f"cannot serialize {type(value).__name__} to JSON")


def dumps_fixed(value) -> str:
    """JSON with floats at exactly 6 decimals; key order as given."""
    out: list[str] = []
    _dump(value, fmt6, out)
    return "".join(out)


def dumps_report(value) -> str:
    """JSON with floats at 9 significant digits; key order as given."""
    out: list[str] = []
    _dump(value, lambda v: f"{v:.9g}", out)
    return "".join(out)


def dumps_exact(value) -> str:
    """JSON with floats in shortest round-trip form; key order as given.
    Parsing the output recovers every float bit for bit."""
    out: list[str] = []
    _dump(value, repr, out)
    return "".join(out)


def _style_dict(style: Style) -> dict:
    return {
        "fill": style.fill,
        "stroke": style.stroke,
        "stroke_width": style.stroke_width,
        "opacity": style.opacity,
        "dash": list(style.dash) if style.dash is not None else None,
    }


def scene_to_json(scene: Scene) -> str:
    """Scene as a JSON document with 6-decimal numeric attributes."""
    layers = []
    for prim in scene.layers:
        if isinstance(prim, PolygonPrim):
            layers.append({
                "type": "polygon",
                "feature_id": prim.feature_id,
                "style": _style_dict(prim.style),
                "rings": [np.asarray(r, dtype=float) for r in prim.rings],
            })
        elif isinstance(prim, PolylinePrim):
            layers.append({
                "type": "polyline",
                "feature_id": prim.feature_id,
                "style": _style_dict(prim.style),
                "points": np.asarray(prim.points, dtype=float),
            })
        elif isinstance(prim, MarkerPrim):
            layers.append({
                "type": "marker",
                "feature_id": prim.feature_id,
                "kind": prim.kind,
                "xy": list(prim.xy),
                "size": prim.size,
                "style": _style_dict(prim.style),
            })
        elif isinstance(prim, TextPrim):
            layers.append({
                "type": "text",
                "feature_id": prim.feature_id,
                "xy": list(prim.xy),
                "text": prim.text,
                "font_size": prim.font_size,
                "anchor": prim.anchor,
                "fill": prim.style.fill,
            })
        elif isinstance(prim, LegendPrim):
            layers.append({
                "type": "legend",
                "xy": list(prim.xy),
                "entries": [[label, fill] for label, fill in prim.entries],
                "font_size": prim.font_size,
                "swatch": prim.swatch,
            })
        else:
            raise NumericError(
                f"unknown primitive {type(prim).__name__}")
    doc = {
        "schema": "moralstat/1",
        "width": scene.width,
        "height": scene.height,
        "notes": list(scene.notes),
        "layers": layers,
    }
    return dumps_fixed(doc)
