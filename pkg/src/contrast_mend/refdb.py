"""Reference database of issue-free foreground/background color pairs."""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .colors import Srgb8, channel_distance, contrast_ratio
from .errors import InconsistentDb, Monochrome

log = logging.getLogger(__name__)

ADMISSION_THRESHOLD = 4.5
BG_MATCH_TOLERANCE = 16


class PairSource(str, enum.Enum):
    REPORT_COLORS = "ReportColors"
    SCREENSHOT_EXTRACTION = "ScreenshotExtraction"


@dataclass(frozen=True, order=True)
class ColorPairRecord:
    app_id: str
    component_type: str
    fg: Srgb8
    bg: Srgb8
    source: PairSource = PairSource.SCREENSHOT_EXTRACTION

    @property
    def key(self) -> tuple:
        return (self.app_id, self.component_type, self.fg, self.bg)

    def to_json(self) -> str:
        return json.dumps(
            {
                "app_id": self.app_id,
                "component_type": self.component_type,
                "fg": self.fg.hex,
                "bg": self.bg.hex,
                "source": self.source.value,
            },
            sort_keys=True,
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "ColorPairRecord":
        d = json.loads(line)
        return cls(
            d["app_id"],
            d["component_type"],
            Srgb8.from_hex(d["fg"]),
            Srgb8.from_hex(d["bg"]),
            PairSource(d.get("source", PairSource.SCREENSHOT_EXTRACTION.value)),
        )


def component_type_of(class_name: str) -> str:
    """``android.widget.TextView`` -> ``TextView``."""
    return class_name.rsplit(".", 1)[-1]


def extract_dominant_pair(pixels: np.ndarray) -> tuple[Srgb8, Srgb8]:
    """Two most frequent opaque colors of a crop as ``(fg, bg)``.

    The most frequent color is the background. Fully transparent pixels are
    ignored; frequency ties go to the numerically smaller packed RGB value.
    """
    px = np.asarray(pixels)
    if px.ndim != 3 or px.shape[-1] not in (3, 4) or px.shape[0] * px.shape[1] == 0:
        raise ValueError("expected a non-empty HxWx3 or HxWx4 raster")
    px = px.astype(np.uint32)
    rgb = px[..., :3].reshape(-1, 3)
    if px.shape[-1] == 4:
        rgb = rgb[px[..., 3].reshape(-1) > 0]
    packed = (rgb[:, 0] << 16) | (rgb[:, 1] << 8) | rgb[:, 2]
    values, counts = np.unique(packed, return_counts=True)
    if values.size < 2:
        raise Monochrome("fewer than two distinct opaque colors")
    # stable sort keeps ascending packed order among equal counts
    order = np.argsort(-counts, kind="stable")
    bg, fg = (Srgb8.from_argb_int(int(values[i])) for i in order[:2])
    return fg, bg


@dataclass
class ReferenceDb:
    by_app: dict[str, list[ColorPairRecord]] = field(default_factory=dict)
    by_type: dict[str, list[ColorPairRecord]] = field(default_factory=dict)
    rejected: int = 0
    _keys: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self._keys)

    def records(self) -> list[ColorPairRecord]:
        return sorted(r for recs in self.by_app.values() for r in recs)

    def ingest(self, rec: ColorPairRecord) -> bool:
        """Add ``rec`` to both indexes; returns False if it was rejected or a duplicate."""
        if contrast_ratio(rec.fg, rec.bg) < ADMISSION_THRESHOLD:
            self.rejected += 1
            return False
        old = self._keys.get(rec.key)
        if old is not None:
            # same pair seen via two sources: keep the smaller one so ingest order never matters
            if rec < old:
                self._keys[rec.key] = rec
                for index, name in ((self.by_app, rec.app_id), (self.by_type, rec.component_type)):
                    bucket = index[name]
                    bucket[bucket.index(old)] = rec
            return False
        self._keys[rec.key] = rec
        self.by_app.setdefault(rec.app_id, []).append(rec)
        self.by_type.setdefault(rec.component_type, []).append(rec)
        return True

    def ingest_all(self, recs: Iterable[ColorPairRecord]) -> "ReferenceDb":
        for rec in recs:
            self.ingest(rec)
        return self

    def merge(self, other: "ReferenceDb") -> "ReferenceDb":
        self.ingest_all(other.records())
        self.rejected += other.rejected
        return self

    def check_consistency(self) -> None:
        a = sorted(r for recs in self.by_app.values() for r in recs)
        t = sorted(r for recs in self.by_type.values() for r in recs)
        if a != t:
            raise InconsistentDb("by_app and by_type hold different records")

    def candidate_tiers(
        self, app_id: str, component_type: str, bg: Srgb8, required: float
    ) -> tuple[list[Srgb8], list[Srgb8]]:
        """App-local and global candidate foregrounds, each ordered by contrast."""

        def collect(recs: Iterable[ColorPairRecord]) -> list[Srgb8]:
            seen: dict[Srgb8, float] = {}
            for rec in recs:
                if channel_distance(rec.bg, bg) > BG_MATCH_TOLERANCE or rec.fg in seen:
                    continue
                ratio = contrast_ratio(rec.fg, bg)
                if ratio >= required:
                    seen[rec.fg] = ratio
            return sorted(seen, key=lambda c: (-seen[c], c.packed()))

        local = collect(sorted(self.by_app.get(app_id, [])))
        others = (r for r in sorted(self.by_type.get(component_type, [])) if r.app_id != app_id)
        return local, collect(others)

    def candidates_for(self, app_id: str, component_type: str, bg: Srgb8, required: float = 4.5) -> list[Srgb8]:
        local, global_ = self.candidate_tiers(app_id, component_type, bg, required)
        return local or global_

    # persistence -----------------------------------------------------------

    def dumps(self) -> str:
        return "".join(rec.to_json() + "\n" for rec in self.records())

    def save(self, path: str | Path) -> None:
        self.check_consistency()
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str) -> "ReferenceDb":
        db = cls()
        for n, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            rec = ColorPairRecord.from_json(line)
            if not db.ingest(rec):
                log.warning("db line %d skipped (duplicate or below threshold)", n)
        db.check_consistency()
        return db

    @classmethod
    def load(cls, path: str | Path) -> "ReferenceDb":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def ingest_record(db: ReferenceDb, rec: ColorPairRecord) -> ReferenceDb:
    db.ingest(rec)
    return db
