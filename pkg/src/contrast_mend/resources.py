"""Index over an apktool-style decompiled resource tree."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .xmldoc import XmlDocument, XmlElement, XmlSyntaxError

COLOR_REF_RE = re.compile(r"^@(?:\+)?color/([A-Za-z0-9_.]+)$")
STYLE_REF_RE = re.compile(r"^@?(?:style/)?([A-Za-z0-9_.]+)$")

# framework colors commonly referenced from app layouts
FRAMEWORK_COLORS = {
    "white": "#FFFFFF",
    "black": "#000000",
    "transparent": "#00000000",
    "darker_gray": "#AAAAAA",
}


def _qualifier_key(dirname: str, base: str) -> tuple[int, str]:
    # unqualified directory first, then qualifiers alphabetically
    return (0 if dirname == base else 1, dirname)


@dataclass(frozen=True)
class Defined:
    """A ``<color>``/``<string>``/``<style>`` definition inside a values file."""

    doc: XmlDocument
    element: XmlElement

    @property
    def value(self) -> str:
        return self.element.text.strip()


class ResourceTree:
    def __init__(self, root: str | Path):
        self.root = Path(root).absolute()
        self._docs: dict[Path, XmlDocument] = {}

    def rel(self, path: Path) -> str:
        return path.relative_to(self.root).as_posix()

    def doc(self, path: str | Path) -> XmlDocument:
        path = Path(path)
        if not path.is_absolute():
            path = self.root / path
        if path not in self._docs:
            self._docs[path] = XmlDocument.load(path)
        return self._docs[path]

    def _res_dirs(self, base: str) -> list[Path]:
        res = self.root / "res"
        if not res.is_dir():
            return []
        dirs = [d for d in res.iterdir() if d.is_dir() and (d.name == base or d.name.startswith(base + "-"))]
        return sorted(dirs, key=lambda d: _qualifier_key(d.name, base))

    @cached_property
    def layout_files(self) -> list[Path]:
        return [f for d in self._res_dirs("layout") for f in sorted(d.rglob("*.xml"))]

    def layouts(self) -> list[XmlDocument]:
        out = []
        for f in self.layout_files:
            try:
                out.append(self.doc(f))
            except XmlSyntaxError:
                continue
        return out

    @cached_property
    def values_files(self) -> list[Path]:
        return [f for d in self._res_dirs("values") for f in sorted(d.glob("*.xml"))]

    def _definitions(self, tag: str) -> dict[str, Defined]:
        out: dict[str, Defined] = {}
        for f in self.values_files:
            try:
                doc = self.doc(f)
            except XmlSyntaxError:
                continue
            for el in doc.iter(tag):
                name = el.get("name")
                # first definition wins: unqualified values/ is scanned first
                if name and name not in out:
                    out[name] = Defined(doc, el)
        return out

    @cached_property
    def colors(self) -> dict[str, Defined]:
        return self._definitions("color")

    @cached_property
    def strings(self) -> dict[str, Defined]:
        return self._definitions("string")

    @cached_property
    def styles(self) -> dict[str, Defined]:
        return self._definitions("style")

    @cached_property
    def public_ids(self) -> dict[int, str]:
        """Resource id value -> name for ``type="id"`` entries of public.xml."""
        out = {}
        for f in self.values_files:
            if f.name != "public.xml":
                continue
            for el in self.doc(f).iter("public"):
                if el.get("type") == "id" and el.get("name") and el.get("id"):
                    out[int(el.get("id"), 16)] = el.get("name")
        return out

    @cached_property
    def color_state_lists(self) -> set[str]:
        return {f.stem for d in self._res_dirs("color") for f in d.glob("*.xml")}

    def drawable_files(self, name: str) -> list[Path]:
        out = []
        for d in self._res_dirs("drawable") + self._res_dirs("mipmap"):
            out.extend(sorted(f for f in d.iterdir() if f.is_file() and f.name.split(".", 1)[0] == name))
        return out

    @cached_property
    def smali_files(self) -> list[Path]:
        out = []
        for d in sorted(self.root.glob("smali*")):
            if d.is_dir():
                out.extend(sorted(d.rglob("*.smali")))
        return out

    @cached_property
    def all_res_xml(self) -> list[Path]:
        res = self.root / "res"
        return sorted(res.rglob("*.xml")) if res.is_dir() else []

    @cached_property
    def color_references(self) -> dict[str, list[tuple[str, str, str | None]]]:
        """Color name -> every (file, locator, attribute or None for text) that references it."""
        out: dict[str, list[tuple[str, str, str | None]]] = {}
        for f in self.all_res_xml:
            try:
                doc = self.doc(f)
            except XmlSyntaxError:
                continue
            rel = self.rel(f)
            for el in doc.elements:
                for attr, value in el.attrs.items():
                    m = COLOR_REF_RE.match(value.strip())
                    if m:
                        out.setdefault(m.group(1), []).append((rel, el.locator, attr))
                if not el.children:
                    m = COLOR_REF_RE.match(el.text.strip())
                    if m:
                        out.setdefault(m.group(1), []).append((rel, el.locator, None))
        return out

    def string_value(self, ref: str) -> str | None:
        if ref.startswith("@string/"):
            d = self.strings.get(ref[len("@string/") :])
            return unescape_android(d.element.text) if d else None
        return unescape_android(ref)

    def style_parent(self, name: str) -> str | None:
        d = self.styles.get(name)
        if d is None:
            return None
        parent = d.element.get("parent")
        if parent is not None:
            if parent.startswith("@android:") or parent.startswith("android:"):
                return None
            m = STYLE_REF_RE.match(parent)
            return m.group(1) if m and m.group(1) in self.styles else None
        if "." in name:
            implicit = name.rsplit(".", 1)[0]
            return implicit if implicit in self.styles else None
        return None


def unescape_android(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        text = text[1:-1]
    return re.sub(r"\\(.)", lambda m: {"n": "\n", "t": "\t"}.get(m.group(1), m.group(1)), text)
