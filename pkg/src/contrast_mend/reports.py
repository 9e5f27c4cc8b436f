"""Issue reports, runtime UI dumps and fg/bg swap correction."""

from __future__ import annotations

import enum
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator

import numpy as np

from .colors import Srgb8, contrast_ratio, contrast_threshold
from .errors import MalformedDump, MalformedReport

REPORT_SCHEMA = "contrast-mend/report@1"
SWAP_TOLERANCE = 16

_BOUNDS_RE = re.compile(r"^\s*\[(-?\d+),(-?\d+)\]\s*\[(-?\d+),(-?\d+)\]\s*$")

Bounds = tuple[int, int, int, int]


class IssueKind(str, enum.Enum):
    TEXT_CONTRAST = "TextContrast"
    IMAGE_CONTRAST = "ImageContrast"


@dataclass(frozen=True)
class IssueRecord:
    index: int
    issue_kind: IssueKind
    activity: str
    fg: Srgb8
    bg: Srgb8
    observed_contrast: float
    required_contrast: float
    resource_id: str | None = None
    bounds: Bounds | None = None
    text_size_pt: float | None = None
    bold: bool | None = None
    screenshot: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "type": self.issue_kind.value,
            "activity": self.activity,
            "resource_id": self.resource_id,
            "bounds": list(self.bounds) if self.bounds else None,
            "foreground": self.fg.hex,
            "background": self.bg.hex,
            "contrast": self.observed_contrast,
            "required": self.required_contrast,
            "text_size_pt": self.text_size_pt,
            "bold": self.bold,
            "screenshot": self.screenshot,
        }


@dataclass(frozen=True)
class PageEntry:
    activity: str
    dump: str | None = None
    screenshot: str | None = None


@dataclass(frozen=True)
class PassedComponent:
    activity: str
    component_type: str
    fg: Srgb8
    bg: Srgb8


@dataclass
class Report:
    app_id: str
    issues: list[IssueRecord]
    pages: list[PageEntry] = field(default_factory=list)
    passed: list[PassedComponent] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    base_dir: Path | None = None

    def page(self, activity: str) -> PageEntry | None:
        for p in self.pages:
            if p.activity == activity:
                return p
        return None

    def resolve(self, rel: str | None) -> Path | None:
        if rel is None:
            return None
        path = Path(rel)
        if not path.is_absolute() and self.base_dir is not None:
            path = self.base_dir / path
        return path


def parse_bounds(value) -> Bounds:
    if isinstance(value, str):
        m = _BOUNDS_RE.match(value)
        if not m:
            raise ValueError(f"bad bounds {value!r}")
        x1, y1, x2, y2 = (int(g) for g in m.groups())
    else:
        x1, y1, x2, y2 = (int(v) for v in value)
    if not (x1 < x2 and y1 < y2):
        raise ValueError(f"bounds not well ordered: {(x1, y1, x2, y2)}")
    return x1, y1, x2, y2


def _issue_from_entry(index: int, entry: dict) -> IssueRecord:
    kind = IssueKind(entry["type"])
    fg = Srgb8.from_hex(entry["foreground"])
    bg = Srgb8.from_hex(entry["background"])
    rid = entry.get("resource_id") or None
    bounds = parse_bounds(entry["bounds"]) if entry.get("bounds") is not None else None
    if rid is None and bounds is None:
        raise ValueError("needs resource_id or bounds")
    size = entry.get("text_size_pt")
    bold = entry.get("bold")
    if "required" in entry and entry["required"] is not None:
        required = float(entry["required"])
        if required not in (3.0, 4.5):
            raise ValueError(f"required contrast {required} not in {{3.0, 4.5}}")
    else:
        required = contrast_threshold(size, bool(bold), image=kind is IssueKind.IMAGE_CONTRAST)
    observed = entry.get("contrast")
    observed = float(observed) if observed is not None else contrast_ratio(fg, bg)
    return IssueRecord(
        index=index,
        issue_kind=kind,
        activity=str(entry.get("activity", "")),
        fg=fg,
        bg=bg,
        observed_contrast=observed,
        required_contrast=required,
        resource_id=rid,
        bounds=bounds,
        text_size_pt=float(size) if size is not None else None,
        bold=bool(bold) if bold is not None else None,
        screenshot=entry.get("screenshot"),
    )


def load_report(text: str, base_dir: str | Path | None = None) -> Report:
    """Parse a report document; invalid issue entries become warnings."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedReport(f"not JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("issues"), list):
        raise MalformedReport("report must be an object with an 'issues' list")

    warnings = []
    issues = []
    for i, entry in enumerate(doc["issues"]):
        try:
            issues.append(_issue_from_entry(i, entry))
        except (KeyError, TypeError, ValueError) as exc:
            warnings.append(f"issue {i}: {exc}")

    pages = [
        PageEntry(str(p.get("activity", "")), p.get("dump"), p.get("screenshot"))
        for p in doc.get("pages", [])
        if isinstance(p, dict)
    ]
    passed = []
    for i, entry in enumerate(doc.get("passed", [])):
        try:
            passed.append(
                PassedComponent(
                    str(entry.get("activity", "")),
                    str(entry["component_type"]),
                    Srgb8.from_hex(entry["foreground"]),
                    Srgb8.from_hex(entry["background"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            warnings.append(f"passed {i}: {exc}")

    return Report(
        app_id=str(doc.get("app_id", "")),
        issues=issues,
        pages=pages,
        passed=passed,
        warnings=warnings,
        base_dir=Path(base_dir) if base_dir is not None else None,
    )


def read_report(path: str | Path) -> Report:
    path = Path(path)
    return load_report(path.read_text(encoding="utf-8"), base_dir=path.parent)


def parse_issue_report(text: str) -> list[IssueRecord]:
    return load_report(text).issues


# ---------------------------------------------------------------------------
# UI dumps


@dataclass
class UiNode:
    class_name: str
    bounds: Bounds
    resource_id: str | None = None
    text: str | None = None
    clickable: bool = False
    children: list["UiNode"] = field(default_factory=list)

    def walk(self, depth: int = 0) -> Iterator[tuple["UiNode", int]]:
        yield self, depth
        for child in self.children:
            yield from child.walk(depth + 1)

    @property
    def area(self) -> int:
        x1, y1, x2, y2 = self.bounds
        return (x2 - x1) * (y2 - y1)

    def encloses(self, b: Bounds) -> bool:
        x1, y1, x2, y2 = self.bounds
        return x1 <= b[0] and y1 <= b[1] and b[2] <= x2 and b[3] <= y2


def _node_from_xml(el: ET.Element) -> UiNode:
    raw = el.get("bounds")
    if raw is None:
        raise MalformedDump(f"node without bounds: {el.attrib}")
    m = _BOUNDS_RE.match(raw)
    if not m:
        raise MalformedDump(f"bad bounds attribute {raw!r}")
    return UiNode(
        class_name=el.get("class", ""),
        bounds=tuple(int(g) for g in m.groups()),
        resource_id=el.get("resource-id") or None,
        text=el.get("text") or None,
        clickable=el.get("clickable", "false").lower() == "true",
        children=[_node_from_xml(c) for c in el if c.tag == "node"],
    )


def parse_ui_dump(xml: str) -> UiNode:
    """Parse a uiautomator-style dump into a node tree.

    A ``<hierarchy>`` wrapper becomes a synthetic root spanning its children.
    """
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        raise MalformedDump(str(exc)) from exc
    if root.tag == "node":
        return _node_from_xml(root)
    if root.tag != "hierarchy":
        raise MalformedDump(f"unexpected root <{root.tag}>")
    children = [_node_from_xml(c) for c in root if c.tag == "node"]
    if not children:
        raise MalformedDump("empty hierarchy")
    span = (
        min(c.bounds[0] for c in children),
        min(c.bounds[1] for c in children),
        max(c.bounds[2] for c in children),
        max(c.bounds[3] for c in children),
    )
    return UiNode("hierarchy", span, children=children)


def find_node(tree: UiNode, bounds: Bounds) -> UiNode | None:
    """Deepest node with exactly these bounds, else the smallest enclosing node."""
    exact = [(d, n) for n, d in tree.walk() if n.bounds == tuple(bounds)]
    if exact:
        return max(exact, key=lambda t: t[0])[1]
    enclosing = [(n.area, -d, n) for n, d in tree.walk() if n.encloses(bounds) and n.class_name != "hierarchy"]
    if not enclosing:
        return None
    return min(enclosing, key=lambda t: (t[0], t[1]))[2]


# ---------------------------------------------------------------------------
# swap correction


def _near_count(crop: np.ndarray, color: Srgb8, tol: int) -> int:
    rgb = crop[..., :3].astype(np.int16)
    target = np.array([color.r, color.g, color.b], dtype=np.int16)
    mask = (np.abs(rgb - target) <= tol).all(axis=-1)
    if crop.shape[-1] == 4:
        mask &= crop[..., 3] > 0
    return int(mask.sum())


def correct_fg_bg_swap(rec: IssueRecord, pixels: np.ndarray | None) -> IssueRecord:
    """Swap fg and bg when the reported foreground dominates the component crop."""
    if pixels is None or rec.bounds is None:
        return rec
    x1, y1, x2, y2 = rec.bounds
    h, w = pixels.shape[:2]
    crop = pixels[max(y1, 0) : min(y2, h), max(x1, 0) : min(x2, w)]
    if crop.size == 0:
        return rec
    if _near_count(crop, rec.fg, SWAP_TOLERANCE) > _near_count(crop, rec.bg, SWAP_TOLERANCE):
        return replace(rec, fg=rec.bg, bg=rec.fg)
    return rec


def load_image(path: str | Path) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as im:
        return np.asarray(im.convert("RGBA"))
