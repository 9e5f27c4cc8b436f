"""Functional-image classification and image recoloring."""

from __future__ import annotations

import enum
import io
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .colors import Srgb8, format_color, is_color_literal, parse_color
from .errors import NoForegroundPixels, NoMatchingPaint
from .reports import UiNode
from .xmldoc import XmlElement

MATCH_TOLERANCE = 16
JPEG_QUALITY = 95
PAINT_ATTRS = ("android:fillColor", "android:strokeColor", "android:tint")

_PAINT_RE = re.compile(r"""(android:(?:fillColor|strokeColor|tint))(\s*=\s*)(["'])([^"']*)\3""")


class ImageKind(str, enum.Enum):
    FUNCTIONAL = "Functional"
    ORNAMENTAL = "Ornamental"


@dataclass(frozen=True)
class ImageClassification:
    kind: ImageKind
    evidence: tuple[str, ...] = ()


def classify_image(element: XmlElement | dict, dump_node: UiNode | None = None) -> ImageClassification:
    attrs = element.attrs if isinstance(element, XmlElement) else dict(element)
    tag = element.tag if isinstance(element, XmlElement) else attrs.get("tag", "")
    evidence = []
    if tag.rsplit(".", 1)[-1] == "ImageButton":
        evidence.append("tag:ImageButton")
    if attrs.get("android:clickable", "").lower() == "true":
        evidence.append("android:clickable")
    if attrs.get("android:onClick"):
        evidence.append("android:onClick")
    if dump_node is not None and dump_node.clickable:
        evidence.append("dump:clickable")
    if evidence:
        return ImageClassification(ImageKind.FUNCTIONAL, tuple(evidence))
    return ImageClassification(ImageKind.ORNAMENTAL)


def recolor_raster(pixels: np.ndarray, src: Srgb8, dst: Srgb8, tol: int = MATCH_TOLERANCE) -> np.ndarray:
    """Move pixels near ``src`` toward ``dst``; alpha and far pixels stay untouched.

    A pixel at per-channel distance ``d <= tol`` from ``src`` is blended as
    ``p + t * (dst - p)`` with ``t = 1 - d / (tol + 1)``, so exact matches land
    on ``dst`` and the blend fades out at the tolerance edge.
    """
    px = np.asarray(pixels)
    if px.ndim != 3 or px.shape[-1] not in (3, 4) or px.size == 0:
        raise ValueError("expected a non-empty HxWx3 or HxWx4 raster")
    out, hits = _kernels.recolor(px, (src.r, src.g, src.b), (dst.r, dst.g, dst.b), tol)
    if hits == 0:
        raise NoForegroundPixels(f"no pixel within {tol} of {src.hex}")
    return out


def recolor_vector(xml: str, src: Srgb8, dst: Srgb8) -> str:
    """Rewrite literal paints equal to ``src``; everything else is left byte-identical."""
    if not re.search(r"<vector[\s>]", xml):
        raise ValueError("not a vector drawable")
    changed = 0

    def swap(m: re.Match) -> str:
        nonlocal changed
        value = m.group(4)
        if not is_color_literal(value):
            return m.group(0)
        color, alpha = parse_color(value)
        if color != src:
            return m.group(0)
        changed += 1
        return f"{m.group(1)}{m.group(2)}{m.group(3)}{format_color(dst, alpha)}{m.group(3)}"

    out = _PAINT_RE.sub(swap, xml)
    if not changed:
        raise NoMatchingPaint(f"no paint equals {src.hex}")
    return out


def vector_paints(xml: str) -> list[str]:
    return [m.group(4).strip() for m in _PAINT_RE.finditer(xml)]


# ---------------------------------------------------------------------------
# file io


def read_raster(data: bytes) -> tuple[np.ndarray, str]:
    from PIL import Image

    with Image.open(io.BytesIO(data)) as im:
        fmt = im.format or "PNG"
        return np.asarray(im.convert("RGBA")).copy(), fmt


def encode_raster(pixels: np.ndarray, fmt: str) -> bytes:
    from PIL import Image

    im = Image.fromarray(np.ascontiguousarray(pixels, dtype=np.uint8), "RGBA")
    buf = io.BytesIO()
    fmt = fmt.upper()
    if fmt == "WEBP":
        im.save(buf, "WEBP", lossless=True, exact=True)
    elif fmt in ("JPEG", "JPG"):
        im.convert("RGB").save(buf, "JPEG", quality=JPEG_QUALITY)
    else:
        im.save(buf, "PNG")
    return buf.getvalue()


def is_raster(path: str | Path) -> bool:
    return Path(path).suffix.lower() in (".png", ".webp", ".jpg", ".jpeg")


def recolor_file_bytes(path: str | Path, data: bytes, src: Srgb8, dst: Srgb8) -> tuple[bytes, list[str]]:
    """New bytes for one drawable file plus notes for the patch report."""
    notes = []
    if is_raster(path):
        pixels, fmt = read_raster(data)
        out = recolor_raster(pixels, src, dst)
        if fmt.upper() == "JPEG":
            notes.append("lossy JPEG re-encode")
        return encode_raster(out, fmt), notes
    text = data.decode("utf-8")
    return recolor_vector(text, src, dst).encode("utf-8"), notes


def foreground_colors(data: bytes, path: str | Path) -> list[tuple[Srgb8, int]]:
    """Opaque colors of a drawable with their pixel (or paint) counts, most frequent first."""
    if is_raster(path):
        pixels, _ = read_raster(data)
        rgb = pixels[..., :3].reshape(-1, 3)[pixels[..., 3].reshape(-1) > 0].astype(np.uint32)
        if rgb.size == 0:
            return []
        packed = (rgb[:, 0] << 16) | (rgb[:, 1] << 8) | rgb[:, 2]
        values, counts = np.unique(packed, return_counts=True)
        order = np.argsort(-counts, kind="stable")
        return [(Srgb8.from_argb_int(int(values[i])), int(counts[i])) for i in order]
    counts: dict[Srgb8, int] = {}
    for value in vector_paints(data.decode("utf-8")):
        if is_color_literal(value):
            c, alpha = parse_color(value)
            if alpha and int(alpha, 16) == 0:
                continue
            counts[c] = counts.get(c, 0) + 1
    return sorted(counts.items(), key=lambda t: (-t[1], t[0].packed()))


def count_near(data: bytes, path: str | Path, color: Srgb8, tol: int = MATCH_TOLERANCE) -> int:
    if is_raster(path):
        pixels, _ = read_raster(data)
        return _kernels.count_near_np(pixels, np.array([color.r, color.g, color.b]), tol)
    return sum(1 for v in vector_paints(data.decode("utf-8")) if is_color_literal(v) and parse_color(v)[0] == color)


def dominant_foreground(data: bytes, path: str | Path, bg: Srgb8, tol: int = MATCH_TOLERANCE) -> Srgb8 | None:
    """Most frequent drawable color that is not the background itself."""
    for color, _ in foreground_colors(data, path):
        if max(abs(color.r - bg.r), abs(color.g - bg.g), abs(color.b - bg.b)) > tol:
            return color
    return None
