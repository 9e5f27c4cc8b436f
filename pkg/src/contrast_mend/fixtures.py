"""Synthetic decompiled app trees with injected contrast defects.

Each generated app directory holds::

    apk/            decompiled tree (res/, smali/)
    capture/        UI dump and page screenshot
    report.json     checker report
    expected.json   designed outcome per issue index

Every app exercises all localization routes; colors and a few structural
variants (landscape layout copy, webp/opaque rasters, large text) are drawn
from a seeded RNG so the corpus is reproducible.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .colors import Srgb8, contrast_ratio
from .localizer import smali_literal

LIGHT_BGS = ("#FFFFFF", "#FAFAFA", "#F5F5F5", "#FFFDE7")
DARK_BGS = ("#212121", "#121212", "#263238")
LIGHT_FGS = ("#9E9E9E", "#BDBDBD", "#AAAAAA", "#90CAF9", "#EF9A9A", "#FFB74D", "#CE93D8", "#80CBC4", "#B0BEC5")
DARK_FGS = ("#424242", "#455A64", "#616161", "#1565C0", "#C62828")
LIGHT_GOOD = ("#616161", "#1976D2", "#D32F2F", "#212121", "#5D4037")
DARK_GOOD = ("#E0E0E0", "#90CAF9", "#FFFFFF", "#EF9A9A")
# light green text on white has no reachable 4.5:1 color within the search space
UNSAT_FG = "#A5D6A7"

ROW_H = 48
PAGE_W = 240
ID_BASE = 0x7F0A0000


@dataclass
class Component:
    name: str
    tag: str
    attrs: dict[str, str]
    text: str | None = None
    dump_id: bool = True
    clickable: bool = False
    paint: str | None = None  # color drawn in the screenshot
    in_land: bool = True


@dataclass
class AppSpec:
    app_id: str
    bg: str
    components: list[Component] = field(default_factory=list)
    issues: list[dict] = field(default_factory=list)
    expected: dict[int, dict] = field(default_factory=dict)
    colors: dict[str, str] = field(default_factory=dict)
    strings: dict[str, str] = field(default_factory=dict)
    styles: list[str] = field(default_factory=list)
    drawables: dict[str, bytes] = field(default_factory=dict)
    smali: dict[str, str] = field(default_factory=dict)
    ids: list[str] = field(default_factory=list)
    passed: list[dict] = field(default_factory=list)
    land: bool = False

    def id_value(self, name: str) -> int:
        if name not in self.ids:
            self.ids.append(name)
        return ID_BASE + self.ids.index(name)

    def add_issue(self, expect: dict, **entry) -> int:
        idx = len(self.issues)
        self.issues.append(entry)
        self.expected[idx] = expect
        return idx


def _png(pixels: np.ndarray, fmt: str = "PNG") -> bytes:
    from .images import encode_raster

    return encode_raster(pixels, fmt)


def glyph_raster(fg: Srgb8, bg: Srgb8 | None, size: int = 24, accent: Srgb8 | None = None) -> np.ndarray:
    """A plus-shaped icon with soft edges, near-color noise and a far accent dot.

    ``bg=None`` gives a transparent canvas, otherwise the canvas is opaque ``bg``.
    """
    px = np.zeros((size, size, 4), dtype=np.uint8)
    if bg is not None:
        px[...] = (bg.r, bg.g, bg.b, 255)
    c0, c1 = size // 2 - 3, size // 2 + 3
    px[3:-3, c0:c1] = (fg.r, fg.g, fg.b, 255)
    px[c0:c1, 3:-3] = (fg.r, fg.g, fg.b, 255)
    # anti-aliased rim: same color, partial alpha
    px[2, c0:c1] = (fg.r, fg.g, fg.b, 128)
    px[-3, c0:c1] = (fg.r, fg.g, fg.b, 96)
    # slightly off-color pixels inside the match tolerance
    near = tuple(min(255, v + 8) if v < 128 else v - 8 for v in (fg.r, fg.g, fg.b))
    px[c0, 4:6] = (*near, 255)
    if accent is not None:
        px[0:2, 0:2] = (accent.r, accent.g, accent.b, 255)
    return px


def vector_xml(fg: str, other: str, accent: str | None = None) -> str:
    return (
        '<vector xmlns:android="http://schemas.android.com/apk/res/android"\n'
        '    android:width="24dp" android:height="24dp"\n'
        '    android:viewportWidth="24" android:viewportHeight="24">\n'
        f'    <path android:fillColor="{fg}" android:pathData="M12,17.27L18.18,21l-1.64,-7.03L22,9.24z"/>\n'
        f'    <path android:fillColor="#00000000" android:strokeColor="{other}" android:pathData="M2,2h20v20h-20z"/>\n'
        f'    <path android:fillColor="{accent or fg}" android:pathData="M4,4h2v2h-2z"/>\n'
        "</vector>\n"
    )


def _pick_fg(rng: random.Random, bg: str, pool: tuple[str, ...], below: float) -> str:
    bgc = Srgb8.from_hex(bg)
    ok = [f for f in pool if contrast_ratio(Srgb8.from_hex(f), bgc) < below]
    return rng.choice(ok)


def design_app(app_id: str, seed: int) -> AppSpec:
    rng = random.Random(seed)
    dark = rng.random() < 0.3
    bg = rng.choice(DARK_BGS if dark else LIGHT_BGS)
    fgs, good = (DARK_FGS, DARK_GOOD) if dark else (LIGHT_FGS, LIGHT_GOOD)
    spec = AppSpec(app_id, bg, land=rng.random() < 0.35)
    pkg = app_id
    rid = lambda name: f"{pkg}:id/{name}"  # noqa: E731

    def add_text(name, attrs, fg, expect, *, large=False, route="id", dump_id=True, in_land=True, swap=False):
        text = f"{name.replace('_', ' ').title()} {seed}"
        spec.strings[name] = text
        attrs = {"android:text": f"@string/{name}", **attrs}
        if dump_id and route == "id":
            attrs = {"android:id": f"@+id/{name}", **attrs}
        spec.components.append(Component(name, "TextView", attrs, text, dump_id and route == "id", paint=fg,
                                          in_land=in_land))
        row = len(spec.components) - 1
        fg_r, bg_r = (bg, fg) if swap else (fg, bg)
        entry = dict(type="TextContrast", activity="MainActivity", foreground=fg_r, background=bg_r,
                     bounds=_bounds(row))
        if route == "id":
            entry["resource_id"] = rid(name)
        if large:
            entry["text_size_pt"] = 18
        spec.add_issue(expect, **entry)

    repaired = {"outcome": "repaired"}

    # direct literal attribute
    fg = _pick_fg(rng, bg, fgs, 4.5)
    add_text("title", {"android:textColor": fg}, fg, repaired, large=rng.random() < 0.3)
    # @color chain, single referrer
    fg = _pick_fg(rng, bg, fgs, 4.5)
    spec.colors["label_text"] = "@color/palette_fg1"
    spec.colors["palette_fg1"] = fg
    add_text("subtitle", {"android:textColor": "@color/label_text"}, fg, repaired)
    # style item reached through an implicit parent
    fg = _pick_fg(rng, bg, fgs, 4.5)
    spec.styles.append(
        '    <style name="Caption" parent="@android:style/TextAppearance.Small">\n'
        f'        <item name="android:textColor">{fg}</item>\n'
        '        <item name="android:textSize">12sp</item>\n'
        "    </style>\n"
        '    <style name="Caption.Muted">\n'
        '        <item name="android:textStyle">italic</item>\n'
        "    </style>\n"
    )
    add_text("caption", {"style": "@style/Caption.Muted"}, fg, repaired)
    # bounds -> dump text -> layout element
    fg = _pick_fg(rng, bg, fgs, 4.5)
    add_text("welcome", {"android:textColor": fg}, fg, repaired, route="bounds", in_land=False)
    # smali const feeding setTextColor
    fg = _pick_fg(rng, bg, fgs, 4.5)
    add_text("status", {"android:textSize": "14sp"}, fg, repaired)
    spec.smali["MainActivity"] = _smali_activity(pkg, spec.id_value("status"), spec.id_value("title"), fg, good[0])
    # shared color resource: one flagged user, one unflagged
    fg = _pick_fg(rng, bg, fgs, 4.5)
    spec.colors["muted"] = fg
    add_text("hint_label", {"android:textColor": "@color/muted"}, fg, repaired)
    spec.strings["footer"] = f"Footer {seed}"
    spec.components.append(Component("footer", "TextView",
                                     {"android:id": "@+id/footer", "android:text": "@string/footer",
                                      "android:textColor": "@color/muted"}, f"Footer {seed}", paint=fg))
    # report lists foreground and background the wrong way round
    fg = _pick_fg(rng, bg, fgs, 4.5)
    add_text("badge", {"android:textColor": fg}, fg, repaired, swap=True)
    # input field: out of scope
    fg = _pick_fg(rng, bg, fgs, 4.5)
    spec.components.append(Component("query", "EditText", {"android:id": "@+id/query", "android:textColor": fg,
                                                           "android:hint": "Search"}, None, paint=fg))
    spec.add_issue({"outcome": "excluded", "reason": "EditText"}, type="TextContrast", activity="MainActivity",
                   resource_id=rid("query"), foreground=fg, background=bg, bounds=_bounds(len(spec.components) - 1))
    # dangling reference
    fg = _pick_fg(rng, bg, fgs, 4.5)
    add_text("legal", {"android:textColor": "@color/legal_text_removed"}, fg,
             {"outcome": "unrepaired", "reason": "DanglingReference"})
    # id that no layout declares
    spec.add_issue({"outcome": "unrepaired", "reason": "NotFound"}, type="TextContrast", activity="MainActivity",
                   resource_id=rid("ghost_label"), foreground=_pick_fg(rng, bg, fgs, 4.5), background=bg)
    if bg == "#FFFFFF":
        add_text("promo", {"android:textColor": UNSAT_FG}, UNSAT_FG, {"outcome": "unrepaired", "reason": "Unsatisfiable"})

    # functional raster icon, two densities
    fg = _pick_fg(rng, bg, fgs, 3.0)
    fgc, bgc = Srgb8.from_hex(fg), Srgb8.from_hex(bg)
    accent = Srgb8.from_hex("#000000" if not dark else "#FFFFFF")
    opaque = rng.random() < 0.4
    fmt = "WEBP" if rng.random() < 0.3 else "PNG"
    ext = ".webp" if fmt == "WEBP" else ".png"
    for density, size in (("mdpi", 24), ("xhdpi", 48)):
        spec.drawables[f"drawable-{density}/ic_send{ext}"] = _png(glyph_raster(fgc, bgc if opaque else None, size, accent), fmt)
    spec.components.append(Component("btn_send", "ImageButton", {"android:id": "@+id/btn_send",
                                                                 "android:src": "@drawable/ic_send"}, None,
                                     clickable=True, paint=fg))
    spec.add_issue(repaired, type="ImageContrast", activity="MainActivity", resource_id=rid("btn_send"),
                   foreground=fg, background=bg, bounds=_bounds(len(spec.components) - 1))
    # functional vector icon, clickable only in the layout
    fg = _pick_fg(rng, bg, fgs, 3.0)
    accent = None
    if rng.random() < 0.5:
        # one paint goes through a color resource instead of a literal
        spec.colors["star_accent"] = fg
        accent = "@color/star_accent"
    spec.drawables["drawable/ic_star.xml"] = vector_xml(fg, good[0], accent).encode()
    spec.components.append(Component("ic_star", "ImageView", {"android:id": "@+id/ic_star",
                                                              "android:clickable": "true",
                                                              "app:srcCompat": "@drawable/ic_star"}, None, paint=fg))
    spec.add_issue(repaired, type="ImageContrast", activity="MainActivity", resource_id=rid("ic_star"),
                   foreground=fg, background=bg, bounds=_bounds(len(spec.components) - 1))
    # ornamental banner
    fg = _pick_fg(rng, bg, fgs, 3.0)
    spec.drawables["drawable/banner.png"] = _png(glyph_raster(Srgb8.from_hex(fg), None, 32))
    spec.components.append(Component("banner", "ImageView", {"android:id": "@+id/banner",
                                                             "android:src": "@drawable/banner"}, None, paint=fg))
    spec.add_issue({"outcome": "unrepaired", "reason": "OrnamentalImage"}, type="ImageContrast",
                   activity="MainActivity", resource_id=rid("banner"), foreground=fg, background=bg,
                   bounds=_bounds(len(spec.components) - 1))
    # decoration with neither id nor text, reported by bounds only
    fg = _pick_fg(rng, bg, fgs, 3.0)
    spec.drawables["drawable/deco.png"] = _png(glyph_raster(Srgb8.from_hex(fg), None, 16))
    spec.components.append(Component("deco", "ImageView", {"android:src": "@drawable/deco"}, None, dump_id=False,
                                     clickable=True, paint=fg, in_land=False))
    spec.add_issue({"outcome": "unrepaired", "reason": "NoText"}, type="ImageContrast", activity="MainActivity",
                   foreground=fg, background=bg, bounds=_bounds(len(spec.components) - 1))

    # issue-free components seed the reference DB
    for k, color in enumerate(rng.sample(good, 3)):
        name = f"info_{k}"
        spec.strings[name] = f"Info {k} {seed}"
        spec.components.append(Component(name, "TextView", {"android:id": f"@+id/{name}", "android:text":
                                                            f"@string/{name}", "android:textColor": color},
                                         f"Info {k} {seed}", paint=color))
        spec.passed.append({"activity": "MainActivity", "component_type": "TextView", "foreground": color,
                            "background": bg})

    for c in spec.components:
        if c.attrs.get("android:id"):
            spec.id_value(c.name)
    return spec


def _bounds(row: int) -> str:
    y = row * ROW_H
    return f"[0,{y}][{PAGE_W},{y + ROW_H - 8}]"


def _smali_activity(pkg: str, status_id: int, title_id: int, fg: str, other: str) -> str:
    cls = "L" + pkg.replace(".", "/") + "/MainActivity;"
    fg_lit = smali_literal(0xFF000000 | Srgb8.from_hex(fg).packed())
    other_lit = smali_literal(0xFF000000 | Srgb8.from_hex(other).packed())
    return f""".class public {cls}
.super Landroid/app/Activity;
.source "MainActivity.java"


# virtual methods
.method protected onCreate(Landroid/os/Bundle;)V
    .locals 3

    invoke-super {{p0, p1}}, Landroid/app/Activity;->onCreate(Landroid/os/Bundle;)V

    const v0, {smali_literal(title_id)}

    invoke-virtual {{p0, v0}}, {cls}->findViewById(I)Landroid/view/View;

    move-result-object v0

    check-cast v0, Landroid/widget/TextView;

    const v1, {other_lit}

    invoke-virtual {{v0, v1}}, Landroid/widget/TextView;->setTextColor(I)V

    .line 21
    const v0, {smali_literal(status_id)}

    invoke-virtual {{p0, v0}}, {cls}->findViewById(I)Landroid/view/View;

    move-result-object v0

    check-cast v0, Landroid/widget/TextView;

    const v2, {fg_lit}

    invoke-virtual {{v0, v2}}, Landroid/widget/TextView;->setTextColor(I)V

    return-void
.end method
"""


# ---------------------------------------------------------------------------
# writing


def _layout_xml(components: list[Component], land: bool = False) -> str:
    lines = [
        '<?xml version="1.0" encoding="utf-8"?>',
        '<LinearLayout xmlns:android="http://schemas.android.com/apk/res/android"',
        '    xmlns:app="http://schemas.android.com/apk/res-auto"',
        '    android:layout_width="match_parent" android:layout_height="match_parent"',
        '    android:orientation="vertical">',
    ]
    for c in components:
        if land and not c.in_land:
            continue
        attrs = "".join(f"\n        {k}={quoteattr(v)}" for k, v in c.attrs.items())
        lines.append(f"    <{c.tag}{attrs}\n        android:layout_width=\"wrap_content\""
                     f" android:layout_height=\"wrap_content\" />")
    lines.append("</LinearLayout>")
    return "\n".join(lines) + "\n"


def _dump_xml(spec: AppSpec) -> str:
    h = len(spec.components) * ROW_H
    out = ['<?xml version="1.0" encoding="UTF-8"?>', '<hierarchy rotation="0">',
           f'  <node index="0" class="android.widget.LinearLayout" resource-id="" text="" clickable="false"'
           f' bounds="[0,0][{PAGE_W},{h}]">']
    for row, c in enumerate(spec.components):
        cls = f"android.widget.{c.tag}"
        res = f"{spec.app_id}:id/{c.name}" if c.dump_id else ""
        text = c.text or ""
        click = "true" if c.clickable else "false"
        out.append(f'    <node index="{row}" class="{cls}" resource-id="{res}" text={quoteattr(text)}'
                   f' clickable="{click}" bounds="{_bounds(row)}" />')
    out += ["  </node>", "</hierarchy>"]
    return "\n".join(out) + "\n"


def _screenshot(spec: AppSpec) -> np.ndarray:
    h = len(spec.components) * ROW_H
    bg = Srgb8.from_hex(spec.bg)
    px = np.zeros((h, PAGE_W, 4), dtype=np.uint8)
    px[...] = (bg.r, bg.g, bg.b, 255)
    for row, c in enumerate(spec.components):
        if c.paint is None:
            continue
        fg = Srgb8.from_hex(c.paint)
        y = row * ROW_H
        if c.tag.endswith("View") and c.tag != "ImageView":
            px[y + 14 : y + 26, 10:130] = (fg.r, fg.g, fg.b, 255)
        else:
            px[y + 8 : y + 32, 10:34] = (fg.r, fg.g, fg.b, 255)
    return px


def _values_xml(tag: str, items: dict[str, str]) -> str:
    body = "".join(f'    <{tag} name="{k}">{escape(v)}</{tag}>\n' for k, v in items.items())
    return f'<?xml version="1.0" encoding="utf-8"?>\n<resources>\n{body}</resources>\n'


def write_app(spec: AppSpec, dest: str | Path) -> Path:
    dest = Path(dest)
    apk = dest / "apk"
    res = apk / "res"
    (res / "layout").mkdir(parents=True, exist_ok=True)
    (res / "values").mkdir(parents=True, exist_ok=True)
    (res / "layout" / "activity_main.xml").write_text(_layout_xml(spec.components))
    if spec.land:
        (res / "layout-land").mkdir(exist_ok=True)
        (res / "layout-land" / "activity_main.xml").write_text(_layout_xml(spec.components, land=True))
    (res / "values" / "colors.xml").write_text(_values_xml("color", spec.colors))
    (res / "values" / "strings.xml").write_text(_values_xml("string", spec.strings))
    (res / "values" / "styles.xml").write_text(
        '<?xml version="1.0" encoding="utf-8"?>\n<resources>\n' + "".join(spec.styles) + "</resources>\n"
    )
    public = "".join(f'    <public type="id" name="{n}" id="0x{ID_BASE + i:08x}" />\n' for i, n in enumerate(spec.ids))
    (res / "values" / "public.xml").write_text(f'<?xml version="1.0" encoding="utf-8"?>\n<resources>\n{public}</resources>\n')
    for rel, data in spec.drawables.items():
        path = res / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    for name, text in spec.smali.items():
        path = apk / "smali" / Path(*spec.app_id.split(".")) / f"{name}.smali"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    (apk / "AndroidManifest.xml").write_text(
        f'<?xml version="1.0" encoding="utf-8"?>\n<manifest package="{spec.app_id}" />\n'
    )

    cap = dest / "capture"
    cap.mkdir(parents=True, exist_ok=True)
    (cap / "main.xml").write_text(_dump_xml(spec))
    (cap / "main.png").write_bytes(_png(_screenshot(spec)))
    report = {
        "schema": "contrast-mend/report@1",
        "app_id": spec.app_id,
        "pages": [{"activity": "MainActivity", "dump": "capture/main.xml", "screenshot": "capture/main.png"}],
        "issues": [{k: v for k, v in e.items() if v is not None} for e in spec.issues],
        "passed": spec.passed,
    }
    (dest / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    (dest / "expected.json").write_text(json.dumps({str(k): v for k, v in spec.expected.items()}, indent=2) + "\n")
    return dest


def build_corpus(dest: str | Path, n_apps: int = 20, seed: int = 7) -> list[Path]:
    dest = Path(dest)
    return [write_app(design_app(f"com.example.app{i:02d}", seed * 1000 + i), dest / f"app{i:02d}") for i in range(n_apps)]


def build_large_app(dest: str | Path, n_layouts: int = 50, n_issues: int = 20, seed: int = 11) -> Path:
    """One app with many layouts and many direct-attribute or color-chain issues."""
    rng = random.Random(seed)
    bg = "#FFFFFF"
    spec = AppSpec("com.example.large", bg)
    per_layout: list[list[Component]] = [[] for _ in range(n_layouts)]
    for i in range(n_issues):
        fg = rng.choice(LIGHT_FGS)
        name = f"label_{i}"
        text = f"Label number {i}"
        spec.strings[name] = text
        if i % 2:
            spec.colors[f"label_{i}_color"] = fg
            color_attr = f"@color/label_{i}_color"
        else:
            color_attr = fg
        comp = Component(name, "TextView", {"android:id": f"@+id/{name}", "android:text": f"@string/{name}",
                                             "android:textColor": color_attr}, text, paint=fg)
        spec.components.append(comp)
        per_layout[i % n_layouts].append(comp)
        spec.add_issue({"outcome": "repaired"}, type="TextContrast", activity="MainActivity",
                       resource_id=f"{spec.app_id}:id/{name}", foreground=fg, background=bg,
                       bounds=_bounds(len(spec.components) - 1))
    for j in range(n_layouts):
        for k in range(6):
            name = f"filler_{j}_{k}"
            per_layout[j].append(Component(name, "TextView", {"android:id": f"@+id/{name}",
                                                              "android:textColor": "#212121"}, None))
    write_app(spec, dest)
    layout_dir = Path(dest) / "apk" / "res" / "layout"
    (layout_dir / "activity_main.xml").unlink()
    for j, comps in enumerate(per_layout):
        (layout_dir / f"screen_{j:02d}.xml").write_text(_layout_xml(comps))
    return Path(dest)
