"""Color primitives for the scene builders.

RGB triples clamped once at construction, hex formatting, the sequential
ramp used by rank choropleths, the 8-class diverging palette, and
three-channel blending for multivariate choropleths.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NumericError


@dataclass(frozen=True)
class ColorRGB:
    """RGB color with channels in [0, 1], clamped exactly once here."""

    r: float
    g: float
    b: float

    def __post_init__(self) -> None:
        for name in ("r", "g", "b"):
            v = float(getattr(self, name))
            if v != v:
                raise NumericError(f"color channel {name} is NaN")
            object.__setattr__(self, name, min(1.0, max(0.0, v)))

    @property
    def hex(self) -> str:
        return "#{:02X}{:02X}{:02X}".format(
            int(round(self.r * 255.0)),
            int(round(self.g * 255.0)),
            int(round(self.b * 255.0)))

    def luminance(self) -> float:
        """Relative luminance weights; used for darker-than comparisons."""
        return 0.2126 * self.r + 0.7152 * self.g + 0.0722 * self.b


def from_hex(code: str) -> ColorRGB:
    if len(code) != 7 or not code.startswith("#"):
        raise NumericError(f"expected #RRGGBB, got {code!r}")
    return ColorRGB(int(code[1:3], 16) / 255.0,
                    int(code[3:5], 16) / 255.0,
                    int(code[5:7], 16) / 255.0)


# sequential ramp endpoints: light grey to dark slate
RAMP_LIGHT = from_hex("#F0F0F0")
RAMP_DARK = from_hex("#22304A")

# 8-class diverging palette: 4 blues (deepest first) then 4 reds
DIVERGING8 = (
    "#08306B", "#2171B5", "#6BAED6", "#C6DBEF",
    "#FCBBA1", "#FB6A4A", "#CB181D", "#67000D",
)

# background for features outside a panel's selection
NEUTRAL = "#F7F7F7"


def sequential_ramp(t: float, light: ColorRGB | None = None,
                    dark: ColorRGB | None = None) -> ColorRGB:
    """Linear RGB interpolation, t = 0 light end, t = 1 dark end."""
    lo = RAMP_LIGHT if light is None else light
    hi = RAMP_DARK if dark is None else dark
    t = min(1.0, max(0.0, float(t)))
    return ColorRGB(
        lo.r + t * (hi.r - lo.r),
        lo.g + t * (hi.g - lo.g),
        lo.b + t * (hi.b - lo.b))


def rgb_blend(x1: float, x2: float, x3: float,
              permutation: tuple[int, int, int] = (0, 1, 2)) -> ColorRGB:
    """Map three normalized values onto the R, G, B channels.

    permutation[c] names which input feeds channel c, so the default
    (0, 1, 2) sends x1 to red, x2 to green, x3 to blue.
    """
    if sorted(permutation) != [0, 1, 2]:
        raise NumericError(
            f"permutation must rearrange (0, 1, 2), got {permutation}")
    vals = (float(x1), float(x2), float(x3))
    return ColorRGB(vals[permutation[0]], vals[permutation[1]],
                    vals[permutation[2]])
