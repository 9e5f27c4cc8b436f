"""Map detected issues onto concrete edit sites in a decompiled app."""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .colors import Srgb8, is_color_literal, parse_color
from .errors import (
    Ambiguous,
    CycleDetected,
    DanglingReference,
    DrawableNotFound,
    NoDumpNode,
    NoRepairableAttribute,
    NoText,
    NotFound,
)
from .reports import Bounds, IssueKind, UiNode, find_node
from .resources import COLOR_REF_RE, FRAMEWORK_COLORS, STYLE_REF_RE, ResourceTree
from .xmldoc import XmlDocument, XmlElement

MAX_REFERENCE_DEPTH = 8

TEXT_COLOR_ATTRS = ("android:textColor", "android:textColorLink", "android:titleTextColor")
STYLE_ATTRS = ("style", "android:textAppearance")
IMAGE_ATTRS = ("android:src", "app:srcCompat", "android:background")


class TargetKind(str, enum.Enum):
    XML_ATTRIBUTE = "XmlAttribute"
    COLOR_RESOURCE = "ColorResource"
    STYLE_ITEM = "StyleItem"
    SMALI_CONST = "SmaliConst"
    DRAWABLE_FILE = "DrawableFile"


@dataclass(frozen=True)
class RepairTarget:
    kind: TargetKind
    file: str
    locator: str
    attribute: str | None
    current_value: str
    # for ColorResource: the attribute or style item whose value starts the chain
    referrer: "RepairTarget | None" = None
    chain: tuple[str, ...] = ()

    @property
    def key(self) -> tuple[str, str, str, str | None]:
        return (self.kind.value, self.file, self.locator, self.attribute)


@dataclass(frozen=True)
class Located:
    doc: XmlDocument
    element: XmlElement

    @property
    def file(self) -> Path:
        return self.doc.path

    @property
    def tag(self) -> str:
        return self.element.tag

    def __repr__(self) -> str:
        return f"Located({self.file}, {self.element.locator}, <{self.tag}>)"


@dataclass(frozen=True)
class ResolvedColor:
    color: Srgb8
    alpha: str
    chain: tuple[str, ...]  # color resource names, referrer side first; last holds the literal


def is_skipped_element(el: XmlElement) -> bool:
    # EditText and its AppCompat/Material subclasses hold input hints
    return el.tag.rsplit(".", 1)[-1].endswith("EditText")


# ---------------------------------------------------------------------------
# component resolution


def bare_id(resource_id: str) -> str:
    """``com.app:id/title`` -> ``title``."""
    name = resource_id.strip()
    if ":" in name:
        name = name.split(":", 1)[1]
    if name.startswith("id/"):
        name = name[3:]
    return name


def _element_id(el: XmlElement) -> str | None:
    value = el.get("android:id")
    if not value:
        return None
    for prefix in ("@+id/", "@id/"):
        if value.startswith(prefix):
            return value[len(prefix) :]
    return None


def resolve_by_id(resource_id: str, layouts: Sequence[XmlDocument]) -> list[Located]:
    if not resource_id:
        raise ValueError("empty resource id")
    name = bare_id(resource_id)
    found = [Located(doc, el) for doc in layouts for el in doc.elements if _element_id(el) == name]
    if not found:
        raise NotFound(f"no layout element with id {name!r}")
    return found


def resolve_by_bounds(
    bounds: Bounds,
    dump: UiNode | None,
    layouts: Sequence[XmlDocument],
    tree: ResourceTree,
    *,
    image: bool = False,
) -> list[Located]:
    """Locate a component through the dump node's text (or id, for images)."""
    if dump is None:
        raise NoDumpNode("no UI dump for this page")
    node = find_node(dump, bounds)
    if node is None:
        raise NoDumpNode(f"no dump node at {bounds}")
    if not node.text:
        if image and node.resource_id:
            return resolve_by_id(node.resource_id, layouts)
        raise NoText(f"dump node {node.class_name} at {node.bounds} has no text")
    matches = []
    for doc in layouts:
        for el in doc.elements:
            raw = el.get("android:text")
            if raw is not None and tree.string_value(raw) == node.text:
                matches.append(Located(doc, el))
    if not matches:
        raise NotFound(f"no layout element with text {node.text!r}")
    if len(matches) > 1:
        raise Ambiguous(f"{len(matches)} layout elements share text {node.text!r}")
    return matches


# ---------------------------------------------------------------------------
# color references


def resolve_color_reference(ref: str, tree: ResourceTree) -> ResolvedColor:
    ref = ref.strip()
    if is_color_literal(ref):
        color, alpha = parse_color(ref)
        return ResolvedColor(color, alpha, ())
    if ref.startswith("@android:color/"):
        literal = FRAMEWORK_COLORS.get(ref.split("/", 1)[1])
        if literal is None:
            raise DanglingReference(ref)
        color, alpha = parse_color(literal)
        return ResolvedColor(color, alpha, ())
    chain: list[str] = []
    current = ref
    while True:
        m = COLOR_REF_RE.match(current)
        if not m:
            raise DanglingReference(f"cannot resolve {current!r}")
        name = m.group(1)
        if name in chain:
            raise CycleDetected(" -> ".join(chain + [name]))
        if len(chain) >= MAX_REFERENCE_DEPTH:
            raise CycleDetected(f"reference chain deeper than {MAX_REFERENCE_DEPTH}: {' -> '.join(chain)}")
        chain.append(name)
        d = tree.colors.get(name)
        if d is None:
            raise DanglingReference(f"@color/{name} is not defined")
        current = d.value
        if is_color_literal(current):
            color, alpha = parse_color(current)
            return ResolvedColor(color, alpha, tuple(chain))


def _value_target(
    kind: TargetKind, file: str, locator: str, attribute: str | None, value: str, tree: ResourceTree
) -> RepairTarget:
    """Target for a color-valued slot, routed to the color resource when it holds a reference."""
    site = RepairTarget(kind, file, locator, attribute, value)
    m = COLOR_REF_RE.match(value.strip())
    if not m:
        return site
    if m.group(1) in tree.color_state_lists and m.group(1) not in tree.colors:
        # state lists are files, not values: override the slot itself
        return site
    resolved = resolve_color_reference(value, tree)
    last = tree.colors[resolved.chain[-1]]
    return RepairTarget(
        TargetKind.COLOR_RESOURCE,
        tree.rel(last.doc.path),
        last.element.locator,
        None,
        last.value,
        referrer=site,
        chain=resolved.chain,
    )


def _style_item(style_name: str, tree: ResourceTree, item: str):
    seen = set()
    name = style_name
    while name and name not in seen:
        seen.add(name)
        d = tree.styles.get(name)
        if d is None:
            return None
        for idx in d.element.children:
            el = d.doc.elements[idx]
            if el.tag == "item" and el.get("name") == item:
                return d.doc, el
        name = tree.style_parent(name)
    return None


def _style_name(value: str) -> str | None:
    value = value.strip()
    if value.startswith("@android:") or value.startswith("?"):
        return None
    m = STYLE_REF_RE.match(value)
    return m.group(1) if m else None


def attribute_set_for(kind: IssueKind, located: Located, tree: ResourceTree) -> list[RepairTarget]:
    el = located.element
    file = tree.rel(located.doc.path)
    if kind is IssueKind.TEXT_CONTRAST:
        if is_skipped_element(el):
            return []
        targets = [
            _value_target(TargetKind.XML_ATTRIBUTE, file, el.locator, attr, el.get(attr), tree)
            for attr in TEXT_COLOR_ATTRS
            if el.get(attr)
        ]
        if targets:
            return targets
        for attr in STYLE_ATTRS:
            style = _style_name(el.get(attr) or "")
            if not style:
                continue
            hit = _style_item(style, tree, "android:textColor")
            if hit is not None:
                doc, item = hit
                return [_value_target(TargetKind.STYLE_ITEM, tree.rel(doc.path), item.locator, None, item.text.strip(), tree)]
        raise NoRepairableAttribute(f"<{el.tag}> at {file}:{el.locator} sets no text color")

    for attr in IMAGE_ATTRS:
        value = el.get(attr)
        if not value:
            continue
        if value.startswith("@drawable/") or value.startswith("@mipmap/"):
            targets = []
            for f in resolve_drawable(value, tree):
                targets += _drawable_targets(f, tree)
            return targets
        if attr != "android:background":
            return [_value_target(TargetKind.XML_ATTRIBUTE, file, el.locator, attr, value, tree)]
    raise NoRepairableAttribute(f"<{el.tag}> at {file}:{el.locator} references no image")


VECTOR_PAINT_ATTRS = ("android:fillColor", "android:strokeColor", "android:tint")


def _drawable_targets(path: Path, tree: ResourceTree) -> list[RepairTarget]:
    """Whole-file target for rasters and literal vector paints; referenced paints go to their color resource."""
    if path.suffix.lower() != ".xml":
        return [RepairTarget(TargetKind.DRAWABLE_FILE, tree.rel(path), "", None, file_digest(path))]
    doc = tree.doc(path)
    rel = tree.rel(path)
    targets = []
    literal = False
    for el in doc.elements:
        for attr in VECTOR_PAINT_ATTRS:
            value = (el.get(attr) or "").strip()
            if COLOR_REF_RE.match(value):
                targets.append(_value_target(TargetKind.XML_ATTRIBUTE, rel, el.locator, attr, value, tree))
            elif is_color_literal(value):
                literal = True
    if literal:
        targets.insert(0, RepairTarget(TargetKind.DRAWABLE_FILE, rel, "", None, file_digest(path)))
    return targets


def resolve_drawable(ref: str, tree: ResourceTree) -> list[Path]:
    name = ref.split("/", 1)[1] if "/" in ref else ref
    files = tree.drawable_files(name)
    if not files:
        raise DrawableNotFound(f"no drawable files for {ref}")
    return files


def file_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def color_reference_sites(target: RepairTarget, tree: ResourceTree) -> list[tuple[str, str, str | None]]:
    """Places outside the target's own chain that would see an in-place edit."""
    assert target.kind is TargetKind.COLOR_RESOURCE
    inside = set()
    for name in target.chain[:-1]:
        d = tree.colors[name]
        inside.add((tree.rel(d.doc.path), d.element.locator, None))
    if target.referrer is not None:
        r = target.referrer
        inside.add((r.file, r.locator, r.attribute))
    sites = []
    for name in target.chain:
        for site in tree.color_references.get(name, []):
            if site not in inside:
                sites.append(site)
    return sorted(set(sites), key=lambda s: (s[0], s[1], s[2] or ""))


# ---------------------------------------------------------------------------
# smali


_INSTR_RE = re.compile(r"^\s*([a-z][a-z0-9/\-]*)\s*(.*)$")
_CONST_RE = re.compile(r"^\s*(const(?:/4|/16|/high16)?)\s+([vp]\d+),\s*(-?0x[0-9a-fA-F]+|-?\d+)\s*$")
_INVOKE_RE = re.compile(r"^\s*invoke-[a-z/\-]+\s+\{([^}]*)\},\s*(\S+)\s*$")
_MOVE_RESULT_RE = re.compile(r"^\s*move-result-object\s+([vp]\d+)\s*$")
_NON_WRITING = ("invoke-", "if-", "goto", "return", "throw", "check-cast", "fill-array-data", "monitor-",
                "packed-switch", "sparse-switch", "nop", "iput", "sput", "aput")
_BLOCK_END = ("if-", "goto", "return", "throw", "packed-switch", "sparse-switch")


def _smali_int(text: str) -> int:
    return int(text, 16) if "0x" in text.lower() else int(text)


def smali_literal(value: int) -> str:
    """Signed 32-bit hex literal as apktool writes it (``-0x1`` for white)."""
    value &= 0xFFFFFFFF
    if value >= 0x80000000:
        return f"-0x{(0x100000000 - value):x}"
    return f"0x{value:x}"


def _invoke_regs(args: str) -> list[str]:
    args = args.strip()
    if ".." in args:
        lo, hi = (a.strip() for a in args.split(".."))
        prefix = lo[0]
        return [f"{prefix}{i}" for i in range(int(lo[1:]), int(hi[1:]) + 1)]
    return [a.strip() for a in args.split(",") if a.strip()]


def _id_value(resource_id: str, tree: ResourceTree) -> int | None:
    name = bare_id(resource_id)
    for value, n in tree.public_ids.items():
        if n == name:
            return value
    return None


def scan_smali_settextcolor(text: str, id_value: int) -> list[tuple[int, str]]:
    """(1-based line, const instruction) for every constant fed to setTextColor on the view."""
    hits = []
    consts: dict[str, int] = {}
    const_line: dict[str, tuple[int, str]] = {}
    views: dict[str, int] = {}
    pending_find: int | None = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or stripped.startswith(".line") or stripped.startswith(".local"):
            continue
        if stripped.startswith(".method"):
            consts.clear()
            const_line.clear()
            views.clear()
            pending_find = None
            continue
        if stripped.startswith(":"):
            # a label opens a new basic block: constants may arrive from elsewhere
            consts.clear()
            const_line.clear()
            continue
        if stripped.startswith("."):
            continue
        m = _CONST_RE.match(stripped)
        if m:
            reg = m.group(2)
            consts[reg] = _smali_int(m.group(3))
            const_line[reg] = (lineno, stripped)
            views.pop(reg, None)
            pending_find = None
            continue
        m = _MOVE_RESULT_RE.match(stripped)
        if m:
            reg = m.group(1)
            consts.pop(reg, None)
            views.pop(reg, None)
            if pending_find is not None:
                views[reg] = pending_find
            pending_find = None
            continue
        m = _INVOKE_RE.match(stripped)
        if m:
            regs = _invoke_regs(m.group(1))
            method = m.group(2)
            pending_find = None
            if method.endswith("->findViewById(I)Landroid/view/View;") and len(regs) >= 2:
                if consts.get(regs[1]) == id_value:
                    pending_find = id_value
            elif method.endswith("->setTextColor(I)V") and len(regs) >= 2:
                if views.get(regs[0]) == id_value and regs[1] in const_line:
                    hits.append(const_line[regs[1]])
            continue
        pending_find = None
        mi = _INSTR_RE.match(stripped)
        if not mi:
            continue
        op, rest = mi.group(1), mi.group(2)
        if op.startswith(_BLOCK_END):
            consts.clear()
            const_line.clear()
        if not op.startswith(_NON_WRITING):
            dest = rest.split(",", 1)[0].strip()
            consts.pop(dest, None)
            const_line.pop(dest, None)
            views.pop(dest, None)
    return hits


def locate_smali_settextcolor(resource_id: str, tree: ResourceTree) -> list[RepairTarget]:
    id_value = _id_value(resource_id, tree)
    if id_value is None:
        return []
    targets = []
    for f in tree.smali_files:
        text = f.read_text(encoding="utf-8")
        if "setTextColor" not in text:
            continue
        for lineno, instr in scan_smali_settextcolor(text, id_value):
            targets.append(RepairTarget(TargetKind.SMALI_CONST, tree.rel(f), f"L{lineno}", None, instr))
    return targets


def smali_const_color(instr: str) -> tuple[Srgb8, int]:
    """Color and alpha byte loaded by a const instruction."""
    m = _CONST_RE.match(instr)
    if not m:
        raise ValueError(f"not a const instruction: {instr!r}")
    # baksmali prints the full 32-bit value for every const width
    value = _smali_int(m.group(3)) & 0xFFFFFFFF
    return Srgb8.from_argb_int(value), value >> 24


def rewrite_smali_const(instr: str, color: Srgb8) -> str:
    """Same register and alpha, new RGB; widens the opcode to ``const`` when needed."""
    m = _CONST_RE.match(instr)
    _, alpha = smali_const_color(instr)
    value = (alpha << 24) | color.packed()
    return f"const {m.group(2)}, {smali_literal(value)}"
