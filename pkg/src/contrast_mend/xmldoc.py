"""Read-only XML view that remembers byte spans, for minimal textual edits.

``xml.etree`` throws away source positions, so elements are collected with
expat (which reports the byte offset of every start tag) and attribute value
and text spans are recovered by scanning the raw start tag.
"""

from __future__ import annotations

import re
import xml.parsers.expat
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ContrastMendError

_ATTR_RE = re.compile(rb"""\s([^\s=/>]+)\s*=\s*(?:"([^"]*)"|'([^']*)')""")


class XmlSyntaxError(ContrastMendError):
    pass


@dataclass
class XmlElement:
    tag: str
    attrs: dict[str, str]
    locator: str
    start: int
    tag_end: int
    parent: int | None
    depth: int
    children: list[int] = field(default_factory=list)
    text: str = ""

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.attrs.get(name, default)


def _start_tag_end(raw: bytes, start: int) -> int:
    quote = None
    i = start + 1
    n = len(raw)
    while i < n:
        ch = raw[i]
        if quote is not None:
            if ch == quote:
                quote = None
        elif ch in (0x22, 0x27):
            quote = ch
        elif ch == 0x3E:  # '>'
            return i + 1
        i += 1
    raise XmlSyntaxError("unterminated start tag")


class XmlDocument:
    def __init__(self, raw: bytes, path: str | Path | None = None):
        self.raw = raw
        self.path = Path(path) if path is not None else None
        self.elements: list[XmlElement] = []
        self._by_locator: dict[str, int] = {}
        self._parse()

    @classmethod
    def load(cls, path: str | Path) -> "XmlDocument":
        path = Path(path)
        return cls(path.read_bytes(), path)

    def _parse(self) -> None:
        parser = xml.parsers.expat.ParserCreate()
        parser.ordered_attributes = False
        stack: list[int] = []
        counters: list[int] = [0]
        text_parts: dict[int, list[str]] = {}

        def start(tag, attrs):
            pos = parser.CurrentByteIndex
            depth = len(stack)
            if stack:
                parent = stack[-1]
                locator = f"{self.elements[parent].locator}/{len(self.elements[parent].children)}"
            else:
                parent = None
                locator = str(counters[0])
                counters[0] += 1
            idx = len(self.elements)
            el = XmlElement(tag, dict(attrs), locator, pos, _start_tag_end(self.raw, pos), parent, depth)
            self.elements.append(el)
            if parent is not None:
                self.elements[parent].children.append(idx)
            self._by_locator[locator] = idx
            stack.append(idx)

        def end(tag):
            idx = stack.pop()
            self.elements[idx].text = "".join(text_parts.pop(idx, []))

        def chars(data):
            if stack:
                text_parts.setdefault(stack[-1], []).append(data)

        parser.StartElementHandler = start
        parser.EndElementHandler = end
        parser.CharacterDataHandler = chars
        try:
            parser.Parse(self.raw, True)
        except xml.parsers.expat.ExpatError as exc:
            raise XmlSyntaxError(f"{self.path}: {exc}") from exc

    @property
    def root(self) -> XmlElement:
        return self.elements[0]

    def at(self, locator: str) -> XmlElement:
        try:
            return self.elements[self._by_locator[locator]]
        except KeyError:
            raise KeyError(f"no element at {locator} in {self.path}") from None

    def locators(self) -> list[str]:
        return [e.locator for e in self.elements]

    def iter(self, tag: str | None = None):
        for el in self.elements:
            if tag is None or el.tag == tag:
                yield el

    def parent_of(self, el: XmlElement) -> XmlElement | None:
        return self.elements[el.parent] if el.parent is not None else None

    def attr_span(self, el: XmlElement, name: str) -> tuple[int, int]:
        """Byte span of the attribute's value (between the quotes)."""
        tag_src = self.raw[el.start : el.tag_end]
        wanted = name.encode()
        for m in _ATTR_RE.finditer(tag_src):
            if m.group(1) == wanted:
                grp = 2 if m.group(2) is not None else 3
                return el.start + m.start(grp), el.start + m.end(grp)
        raise KeyError(f"<{el.tag}> at {el.locator} has no attribute {name}")

    def text_span(self, el: XmlElement) -> tuple[int, int]:
        """Byte span of the stripped direct text of a leaf element."""
        begin = el.tag_end
        if self.raw[begin - 2 : begin] == b"/>":
            raise KeyError(f"<{el.tag}> at {el.locator} is self-closing")
        end = self.raw.index(b"<", begin)
        chunk = self.raw[begin:end]
        lead = len(chunk) - len(chunk.lstrip())
        trail = len(chunk.rstrip())
        return begin + lead, begin + max(trail, lead)

    def read_span(self, span: tuple[int, int]) -> str:
        return self.raw[span[0] : span[1]].decode("utf-8")

    def android_prefix(self) -> str:
        for key, value in self.root.attrs.items():
            if key.startswith("xmlns:") and value == "http://schemas.android.com/apk/res/android":
                return key[6:]
        return "android"


def splice(raw: bytes, edits: list[tuple[int, int, bytes]]) -> bytes:
    """Apply non-overlapping (start, end, replacement) edits."""
    out = []
    pos = 0
    for start, end, rep in sorted(edits):
        if start < pos:
            raise ValueError("overlapping edits")
        out.append(raw[pos:start])
        out.append(rep)
        pos = end
    out.append(raw[pos:])
    return b"".join(out)
