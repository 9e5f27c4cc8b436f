"""Color values, HSV conversion and WCAG contrast math."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

NEUTRAL_MAX_SATURATION = 0.10
HUE_TOLERANCE_DEG = 30.0

_HEX_RE = re.compile(r"^#([0-9a-fA-F]{3,4}|[0-9a-fA-F]{6}|[0-9a-fA-F]{8})$")


@dataclass(frozen=True, order=True)
class Srgb8:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 0 <= v <= 255:
                raise ValueError(f"channel {name}={v!r} outside 0..255")

    @classmethod
    def from_hex(cls, text: str) -> "Srgb8":
        """Parse ``#RGB``, ``#ARGB``, ``#RRGGBB`` or ``#AARRGGBB``; alpha is dropped."""
        return parse_color(text)[0]

    @classmethod
    def from_argb_int(cls, value: int) -> "Srgb8":
        value &= 0xFFFFFFFF
        return cls((value >> 16) & 0xFF, (value >> 8) & 0xFF, value & 0xFF)

    @property
    def hex(self) -> str:
        return f"#{self.r:02X}{self.g:02X}{self.b:02X}"

    def packed(self) -> int:
        return (self.r << 16) | (self.g << 8) | self.b

    def __str__(self) -> str:
        return self.hex


BLACK = Srgb8(0, 0, 0)
WHITE = Srgb8(255, 255, 255)


@dataclass(frozen=True)
class Hsv:
    h: float
    s: float
    v: float

    def __post_init__(self):
        if not (0.0 <= self.h < 360.0 and 0.0 <= self.s <= 1.0 and 0.0 <= self.v <= 1.0):
            raise ValueError(f"HSV out of range: {self}")


class SaturationLevel(enum.IntEnum):
    LOW = 0
    MEDIUM = 1
    HIGH = 2


def parse_color(text: str) -> tuple[Srgb8, str]:
    """Return the RGB part and the alpha prefix exactly as written.

    The prefix is ``""`` for opaque forms and two hex digits otherwise, so
    ``"#" + prefix + rgb`` rebuilds an equivalent literal.
    """
    m = _HEX_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a color literal: {text!r}")
    digits = m.group(1)
    if len(digits) in (3, 4):
        alpha = digits[0] * 2 if len(digits) == 4 else ""
        rgb = "".join(ch * 2 for ch in digits[-3:])
    else:
        alpha = digits[:2] if len(digits) == 8 else ""
        rgb = digits[-6:]
    return Srgb8(int(rgb[0:2], 16), int(rgb[2:4], 16), int(rgb[4:6], 16)), alpha


def is_color_literal(text: str) -> bool:
    return bool(_HEX_RE.match(text.strip()))


def format_color(c: Srgb8, alpha: str = "") -> str:
    return f"#{alpha.upper()}{c.r:02X}{c.g:02X}{c.b:02X}"


def rgb_to_hsv(c: Srgb8) -> Hsv:
    r, g, b = c.r / 255.0, c.g / 255.0, c.b / 255.0
    mx = max(r, g, b)
    mn = min(r, g, b)
    if mx == mn:
        h = 0.0
    elif mx == r:
        h = 60.0 * (g - b) / (mx - mn)
    elif mx == g:
        h = 60.0 * (b - r) / (mx - mn) + 120.0
    else:
        h = 60.0 * (r - g) / (mx - mn) + 240.0
    if h < 0.0:
        h += 360.0
    if h >= 360.0:
        h -= 360.0
    s = 0.0 if mx == 0.0 else (mx - mn) / mx
    return Hsv(h, s, mx)


def _channel(x: float) -> int:
    return int(math.floor(x * 255.0 + 0.5))


def hsv_to_rgb(c: Hsv) -> Srgb8:
    h, s, v = c.h, c.s, c.v
    if s == 0.0:
        k = _channel(v)
        return Srgb8(k, k, k)
    hh = (h % 360.0) / 60.0
    i = int(math.floor(hh))
    f = hh - i
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    i %= 6
    if i == 0:
        r, g, b = v, t, p
    elif i == 1:
        r, g, b = q, v, p
    elif i == 2:
        r, g, b = p, v, t
    elif i == 3:
        r, g, b = p, q, v
    elif i == 4:
        r, g, b = t, p, v
    else:
        r, g, b = v, p, q
    return Srgb8(_channel(r), _channel(g), _channel(b))


def linearize(u: float) -> float:
    if u <= 0.03928:
        return u / 12.92
    return ((u + 0.055) / 1.055) ** 2.4


# shared with the vectorized kernels so scalar and array paths agree bit for bit
LINEAR_TABLE = tuple(linearize(i / 255.0) for i in range(256))


def relative_luminance(c: Srgb8) -> float:
    return 0.2126 * LINEAR_TABLE[c.r] + 0.7152 * LINEAR_TABLE[c.g] + 0.0722 * LINEAR_TABLE[c.b]


def ratio_from_luminance(l1: float, l2: float) -> float:
    hi = max(l1, l2)
    lo = min(l1, l2)
    return (hi + 0.05) / (lo + 0.05)


def contrast_ratio(a: Srgb8, b: Srgb8) -> float:
    """WCAG contrast ratio in [1, 21]."""
    return ratio_from_luminance(relative_luminance(a), relative_luminance(b))


def contrast_threshold(text_size_pt: float | None = None, bold: bool = False, *, image: bool = False) -> float:
    """Minimum ratio: 4.5 for small text, 3.0 for large text and for images.

    A missing text size is treated as small text.
    """
    if image:
        return 3.0
    if text_size_pt is None:
        return 4.5
    if text_size_pt <= 0:
        raise ValueError("text size must be positive")
    if text_size_pt >= 18.0 or (bold and text_size_pt >= 14.0):
        return 3.0
    return 4.5


def saturation_level(s: float) -> SaturationLevel:
    if s <= 0.33:
        return SaturationLevel.LOW
    if s <= 0.67:
        return SaturationLevel.MEDIUM
    return SaturationLevel.HIGH


def is_neutral(c: Srgb8) -> bool:
    return rgb_to_hsv(c).s <= NEUTRAL_MAX_SATURATION


def hue_diff(h1: float, h2: float) -> float:
    """Circular distance between two hues, in [0, 180]."""
    d = abs(h1 - h2) % 360.0
    return 360.0 - d if d > 180.0 else d


def hue_consistent(h1: float, h2: float) -> bool:
    return hue_diff(h1, h2) <= HUE_TOLERANCE_DEG


def cone_distance(a: Hsv, b: Hsv) -> float:
    """Euclidean distance between two colors embedded in the HSV cone."""
    ha = math.radians(a.h)
    hb = math.radians(b.h)
    dx = a.s * a.v * math.cos(ha) - b.s * b.v * math.cos(hb)
    dy = a.s * a.v * math.sin(ha) - b.s * b.v * math.sin(hb)
    dz = a.v - b.v
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def channel_distance(a: Srgb8, b: Srgb8) -> int:
    return max(abs(a.r - b.r), abs(a.g - b.g), abs(a.b - b.b))
