"""End-to-end repair: localize, select, patch, apply, verify."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .colors import Srgb8, contrast_ratio, format_color, is_color_literal, parse_color
from .errors import (
    ConflictingSharedTarget,
    ContrastMendError,
    Monochrome,
    NoForegroundPixels,
    NoRepairableAttribute,
    NotFound,
    OrnamentalImage,
    StalePatch,
)
from .harmony import TemplateFit, fit_page
from .images import (
    ImageKind,
    classify_image,
    count_near,
    dominant_foreground,
    recolor_file_bytes,
)
from .localizer import (
    Located,
    RepairTarget,
    TargetKind,
    attribute_set_for,
    color_reference_sites,
    file_digest,
    is_skipped_element,
    locate_smali_settextcolor,
    resolve_by_bounds,
    resolve_by_id,
    resolve_color_reference,
    rewrite_smali_const,
    smali_const_color,
)
from .refdb import ColorPairRecord, PairSource, ReferenceDb, component_type_of, extract_dominant_pair
from .reports import IssueKind, IssueRecord, Report, UiNode, correct_fg_bg_swap, find_node, load_image, parse_ui_dump
from .resources import COLOR_REF_RE, ResourceTree
from .selector import SelectionInput, SelectionResult, Strategy, filter_consistent, select_optimal
from .xmldoc import XmlDocument, splice

log = logging.getLogger(__name__)

PATCH_REPORT_SCHEMA = "contrast-mend/patch-report@1"
MINT_PREFIX = "contrast_fix_"
MINT_FILE = "res/values/colors.xml"


@dataclass
class Patch:
    kind: TargetKind
    file: str
    locator: str
    attribute: str | None
    old_value: str
    new_value: str
    issue_index: int
    strategy: str
    color: Srgb8
    covers: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    payload: bytes | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.old_value == self.new_value:
            raise ValueError("patch would not change anything")
        if not self.covers:
            self.covers = [self.issue_index]

    @property
    def is_insertion(self) -> bool:
        return self.kind is TargetKind.COLOR_RESOURCE and self.old_value == ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "file": self.file,
            "locator": self.locator,
            "attribute": self.attribute,
            "old_value": self.old_value,
            "new_value": self.new_value,
            "issue_index": self.issue_index,
            "covers": sorted(self.covers),
            "strategy": self.strategy,
            "color": self.color.hex,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Patch":
        return cls(
            kind=TargetKind(d["kind"]),
            file=d["file"],
            locator=d["locator"],
            attribute=d.get("attribute"),
            old_value=d["old_value"],
            new_value=d["new_value"],
            issue_index=int(d["issue_index"]),
            strategy=d["strategy"],
            color=Srgb8.from_hex(d["color"]),
            covers=[int(i) for i in d.get("covers", [])],
            notes=list(d.get("notes", [])),
        )


@dataclass
class PatchReport:
    app_id: str
    patches: list[Patch] = field(default_factory=list)
    unrepaired: list[tuple[int, str, str]] = field(default_factory=list)
    satisfied: list[int] = field(default_factory=list)
    excluded: list[tuple[int, str]] = field(default_factory=list)
    issues: dict[int, dict] = field(default_factory=dict)
    selections: dict[int, dict] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def repaired_indexes(self) -> list[int]:
        done = {i for p in self.patches for i in p.covers}
        return sorted(done | set(self.satisfied))

    @property
    def in_scope(self) -> int:
        return len(self.repaired_indexes) + len(self.unrepaired)

    @property
    def repair_rate(self) -> float:
        return compute_repair_rate(self)

    def to_dict(self) -> dict:
        return {
            "schema": PATCH_REPORT_SCHEMA,
            "app_id": self.app_id,
            "repair_rate": round(self.repair_rate, 6),
            "patches": [p.to_dict() for p in self.patches],
            "unrepaired": [{"issue_index": i, "reason": r, "detail": d} for i, r, d in self.unrepaired],
            "satisfied": list(self.satisfied),
            "excluded": [{"issue_index": i, "reason": r} for i, r in self.excluded],
            "issues": {str(k): v for k, v in sorted(self.issues.items())},
            "selections": {str(k): v for k, v in sorted(self.selections.items())},
            "warnings": list(self.warnings),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "PatchReport":
        if d.get("schema") != PATCH_REPORT_SCHEMA:
            raise ValueError(f"unsupported patch report schema {d.get('schema')!r}")
        return cls(
            app_id=d.get("app_id", ""),
            patches=[Patch.from_dict(p) for p in d.get("patches", [])],
            unrepaired=[(int(u["issue_index"]), u["reason"], u.get("detail", "")) for u in d.get("unrepaired", [])],
            satisfied=[int(i) for i in d.get("satisfied", [])],
            excluded=[(int(e["issue_index"]), e["reason"]) for e in d.get("excluded", [])],
            issues={int(k): v for k, v in d.get("issues", {}).items()},
            selections={int(k): v for k, v in d.get("selections", {}).items()},
            warnings=list(d.get("warnings", [])),
        )

    @classmethod
    def load(cls, path: str | Path) -> "PatchReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def compute_repair_rate(report: PatchReport) -> float:
    """Repaired fraction of in-scope issues (excluded issues are not in scope)."""
    total = report.in_scope
    return len(report.repaired_indexes) / total if total else 0.0


def repair_rate(repaired: int, total: int) -> float:
    return repaired / total if total else 0.0


# ---------------------------------------------------------------------------
# planning


class _Planner:
    def __init__(self, tree: ResourceTree, report: Report, db: ReferenceDb, skip: Iterable[int] = ()):
        self.tree = tree
        self.report = report
        self.db = db
        self.skip = set(skip)
        self.layouts = tree.layouts()
        self.out = PatchReport(app_id=report.app_id, warnings=list(report.warnings))
        self.patched: dict[tuple, Patch] = {}
        self.minted: dict[str, Patch] = {}
        self._dumps: dict[str, UiNode | None] = {}
        self._shots: dict[str, np.ndarray | None] = {}

    # inputs ------------------------------------------------------------------

    def dump_for(self, activity: str) -> UiNode | None:
        if activity not in self._dumps:
            page = self.report.page(activity)
            path = self.report.resolve(page.dump) if page else None
            self._dumps[activity] = parse_ui_dump(path.read_text(encoding="utf-8")) if path and path.exists() else None
        return self._dumps[activity]

    def screenshot_for(self, issue: IssueRecord) -> np.ndarray | None:
        rel = issue.screenshot
        if rel is None:
            page = self.report.page(issue.activity)
            rel = page.screenshot if page else None
        path = self.report.resolve(rel)
        if path is None or not path.exists():
            return None
        key = str(path)
        if key not in self._shots:
            self._shots[key] = load_image(path)
        return self._shots[key]

    # localization ------------------------------------------------------------

    def locate(self, issue: IssueRecord) -> tuple[list[Located], list[ContrastMendError]]:
        errors: list[ContrastMendError] = []
        if issue.resource_id:
            try:
                return resolve_by_id(issue.resource_id, self.layouts), errors
            except NotFound as exc:
                errors.append(exc)
        if issue.bounds is not None:
            try:
                found = resolve_by_bounds(
                    issue.bounds,
                    self.dump_for(issue.activity),
                    self.layouts,
                    self.tree,
                    image=issue.issue_kind is IssueKind.IMAGE_CONTRAST,
                )
                return found, errors
            except ContrastMendError as exc:
                errors.append(exc)
        return [], errors

    def targets_for(self, issue: IssueRecord, located: list[Located]) -> tuple[list[RepairTarget], list]:
        errors = []
        targets: dict[tuple, RepairTarget] = {}
        for loc in located:
            try:
                for t in attribute_set_for(issue.issue_kind, loc, self.tree):
                    # one color resource may be reached from several referrers
                    targets.setdefault((t.key, t.referrer.key if t.referrer else None), t)
            except ContrastMendError as exc:
                errors.append(exc)
        if issue.issue_kind is IssueKind.TEXT_CONTRAST and issue.resource_id:
            for t in locate_smali_settextcolor(issue.resource_id, self.tree):
                targets.setdefault(t.key, t)
        return list(targets.values()), errors

    # current state -----------------------------------------------------------

    def current_color(self, t: RepairTarget) -> Srgb8 | None:
        """Literal color a target holds right now, or None if it cannot be known statically."""
        if t.kind is TargetKind.SMALI_CONST:
            return smali_const_color(t.current_value)[0]
        try:
            return resolve_color_reference(t.current_value, self.tree).color
        except ContrastMendError:
            return None

    def drawable_state(self, t: RepairTarget, issue: IssueRecord) -> str:
        """``"needs"``, ``"ok"`` or ``"missing"`` for a drawable file target."""
        path = self.tree.root / t.file
        data = path.read_bytes()
        dominant = dominant_foreground(data, path, issue.bg)
        if dominant is not None and contrast_ratio(dominant, issue.bg) >= issue.required_contrast:
            return "ok"
        return "needs" if count_near(data, path, issue.fg) > 0 else "missing"

    # page context ------------------------------------------------------------

    def page_template(self, issue: IssueRecord, located: list[Located]) -> TemplateFit | None:
        colors: list[tuple[Srgb8, float]] = []
        for other in self.report.issues:
            if other.activity == issue.activity:
                colors += [(other.fg, 1.0), (other.bg, 1.0)]
        for p in self.report.passed:
            if p.activity == issue.activity:
                colors += [(p.fg, 1.0), (p.bg, 1.0)]
        for doc in sorted({loc.doc.path: loc.doc for loc in located}.values(), key=lambda d: str(d.path)):
            for el in doc.elements:
                for value in el.attrs.values():
                    value = value.strip()
                    if is_color_literal(value) or COLOR_REF_RE.match(value):
                        try:
                            colors.append((resolve_color_reference(value, self.tree).color, 1.0))
                        except ContrastMendError:
                            pass
        return fit_page(colors)

    def select(self, issue: IssueRecord, located: list[Located]) -> SelectionResult:
        if located:
            ctype = component_type_of(located[0].tag)
        else:
            ctype = "ImageView" if issue.issue_kind is IssueKind.IMAGE_CONTRAST else "TextView"
        local, global_ = self.db.candidate_tiers(self.report.app_id, ctype, issue.bg, issue.required_contrast)
        # the app's own colors win whenever one of them is consistent with the original
        candidates: list[Srgb8] = []
        for tier in (local, global_):
            if filter_consistent(tier, issue.fg):
                candidates = tier
                break
        template = self.page_template(issue, located)
        return select_optimal(
            SelectionInput(issue.fg, issue.bg, issue.required_contrast, tuple(candidates), template)
        )

    # patch materialization ----------------------------------------------------

    def _component_sites(self, targets: list[RepairTarget]) -> set[tuple]:
        sites = set()
        for t in targets:
            src = t.referrer if t.referrer is not None else t
            sites.add((src.file, src.locator, src.attribute))
        return sites

    def _literal_for(self, current: str, color: Srgb8) -> str:
        alpha = parse_color(current)[1] if is_color_literal(current) else ""
        return format_color(color, alpha)

    def materialize(self, issue: IssueRecord, t: RepairTarget, color: Srgb8, strategy: str,
                    all_targets: list[RepairTarget]) -> list[Patch]:
        idx = issue.index
        if t.kind in (TargetKind.XML_ATTRIBUTE, TargetKind.STYLE_ITEM):
            return [Patch(t.kind, t.file, t.locator, t.attribute, t.current_value,
                          self._literal_for(t.current_value, color), idx, strategy, color)]
        if t.kind is TargetKind.SMALI_CONST:
            return [Patch(t.kind, t.file, t.locator, None, t.current_value,
                          rewrite_smali_const(t.current_value, color), idx, strategy, color)]
        if t.kind is TargetKind.DRAWABLE_FILE:
            path = self.tree.root / t.file
            data, notes = recolor_file_bytes(path, path.read_bytes(), issue.fg, color)
            new_digest = "sha256:" + hashlib.sha256(data).hexdigest()
            return [Patch(t.kind, t.file, t.locator, None, t.current_value, new_digest, idx, strategy, color,
                          notes=notes, payload=data)]

        # color resource: edit in place unless someone outside this issue shares it
        outside = [s for s in color_reference_sites(t, self.tree) if s not in self._component_sites(all_targets)]
        new_literal = self._literal_for(t.current_value, color)
        if not outside:
            return [Patch(t.kind, t.file, t.locator, None, t.current_value, new_literal, idx, strategy, color)]
        name = f"{MINT_PREFIX}{new_literal.lstrip('#').upper()}"
        patches = []
        if name not in self.minted and name not in self.tree.colors:
            mint = Patch(TargetKind.COLOR_RESOURCE, MINT_FILE, f"new:{name}", None, "", new_literal, idx, strategy,
                         color, notes=[f"shared by {len(outside)} other site(s)"])
            self.minted[name] = mint
            patches.append(mint)
        r = t.referrer
        patches.append(Patch(r.kind, r.file, r.locator, r.attribute, r.current_value, f"@color/{name}", idx,
                             strategy, color))
        return patches

    # main loop -----------------------------------------------------------------

    def run(self) -> PatchReport:
        for issue in self.report.issues:
            if issue.index in self.skip:
                self.out.excluded.append((issue.index, "OperatorSkip"))
                continue
            try:
                self.handle(issue)
            except ContrastMendError as exc:
                self.out.unrepaired.append((issue.index, exc.reason, str(exc)))
        self.out.unrepaired.sort()
        self.out.satisfied.sort()
        self.out.excluded.sort()
        return self.out

    def handle(self, issue: IssueRecord) -> None:
        issue = correct_fg_bg_swap(issue, self.screenshot_for(issue))
        self.out.issues[issue.index] = {
            "type": issue.issue_kind.value,
            "foreground": issue.fg.hex,
            "background": issue.bg.hex,
            "required": issue.required_contrast,
        }
        located, errors = self.locate(issue)
        if not located and errors and not (issue.issue_kind is IssueKind.TEXT_CONTRAST and issue.resource_id):
            raise errors[-1]

        if issue.issue_kind is IssueKind.TEXT_CONTRAST and located and all(is_skipped_element(l.element) for l in located):
            self.out.excluded.append((issue.index, "EditText"))
            del self.out.issues[issue.index]
            return
        located = [l for l in located if not is_skipped_element(l.element)]

        if issue.issue_kind is IssueKind.IMAGE_CONTRAST:
            dump = self.dump_for(issue.activity)
            node = find_node(dump, issue.bounds) if dump is not None and issue.bounds else None
            verdict = classify_image(located[0].element, node)
            if verdict.kind is ImageKind.ORNAMENTAL:
                raise OrnamentalImage(f"<{located[0].tag}> is not clickable")

        targets, target_errors = self.targets_for(issue, located)
        if not targets:
            raise (target_errors + errors + [NoRepairableAttribute("no edit site found")])[0]

        failing = []
        for t in targets:
            prior = self.patched.get(t.key)
            if prior is None and t.referrer is not None:
                prior = self.patched.get(t.referrer.key)
            if prior is not None:
                if contrast_ratio(prior.color, issue.bg) < issue.required_contrast:
                    raise ConflictingSharedTarget(f"{t.file}:{t.locator} already set to {prior.color.hex}")
                if issue.index not in prior.covers:
                    prior.covers.append(issue.index)
                continue
            if t.kind is TargetKind.DRAWABLE_FILE:
                state = self.drawable_state(t, issue)
                if state == "missing":
                    raise NoForegroundPixels(f"{t.file} has no pixels near {issue.fg.hex}")
                if state == "needs":
                    failing.append(t)
                continue
            current = self.current_color(t)
            if current is None or contrast_ratio(current, issue.bg) < issue.required_contrast:
                failing.append(t)

        if not failing:
            if not any(issue.index in p.covers for p in self.patched.values()):
                self.out.satisfied.append(issue.index)
            return

        result = self.select(issue, located)
        self.out.selections[issue.index] = result.to_dict()
        new_patches: list[Patch] = []
        for t in failing:
            for p in self.materialize(issue, t, result.color, result.strategy.value, targets):
                if not any((q.file, q.locator, q.attribute) == (p.file, p.locator, p.attribute) for q in new_patches):
                    new_patches.append(p)
        for p in new_patches:
            self.out.patches.append(p)
        for t in failing:
            # index the patch under the slot it rewrote so later issues see it
            for p in new_patches:
                if (p.file, p.locator) == (t.file, t.locator):
                    self.patched[t.key] = p
                elif t.referrer is not None and (p.file, p.locator) == (t.referrer.file, t.referrer.locator):
                    self.patched[t.referrer.key] = p


def plan_repairs(tree: ResourceTree | str | Path, report: Report, db: ReferenceDb, skip: Iterable[int] = ()) -> PatchReport:
    if not isinstance(tree, ResourceTree):
        tree = ResourceTree(tree)
    return _Planner(tree, report, db, skip).run()


# ---------------------------------------------------------------------------
# applying


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _locator_key(p: Patch) -> tuple:
    parts = p.locator.lstrip("L").split("/") if not p.locator.startswith("new:") else []
    try:
        nums = tuple(int(x) for x in parts)
    except ValueError:
        nums = ()
    return (p.is_insertion, nums, p.attribute or "")


def _edit_file(raw: bytes | None, path: Path, patches: list[Patch]) -> bytes:
    patches = sorted(patches, key=_locator_key)
    if patches[0].kind is TargetKind.DRAWABLE_FILE:
        (p,) = patches
        if raw is None or "sha256:" + hashlib.sha256(raw).hexdigest() != p.old_value:
            raise StalePatch(f"{p.file} changed since planning")
        if p.payload is None:
            raise StalePatch(f"{p.file}: patch carries no image bytes")
        return p.payload

    if patches[0].kind is TargetKind.SMALI_CONST:
        if raw is None:
            raise StalePatch(f"{path} is missing")
        lines = raw.decode("utf-8").splitlines(keepends=True)
        for p in patches:
            n = int(p.locator[1:]) - 1
            if n >= len(lines) or lines[n].strip() != p.old_value:
                raise StalePatch(f"{p.file}:{p.locator} no longer holds {p.old_value!r}")
            indent = lines[n][: len(lines[n]) - len(lines[n].lstrip())]
            ending = lines[n][len(lines[n].rstrip("\r\n")) :]
            lines[n] = indent + p.new_value + ending
        return "".join(lines).encode("utf-8")

    inserts = [p for p in patches if p.is_insertion]
    edits = []
    if raw is None:
        if not inserts or len(inserts) != len(patches):
            raise StalePatch(f"{path} is missing")
        raw = b'<?xml version="1.0" encoding="utf-8"?>\n<resources>\n</resources>\n'
    doc = XmlDocument(raw, path)
    for p in patches:
        if p.is_insertion:
            continue
        el = doc.at(p.locator)
        span = doc.attr_span(el, p.attribute) if p.attribute else doc.text_span(el)
        if doc.read_span(span) != p.old_value:
            raise StalePatch(f"{p.file}:{p.locator} holds {doc.read_span(span)!r}, expected {p.old_value!r}")
        edits.append((span[0], span[1], p.new_value.encode("utf-8")))
    if inserts:
        existing = {el.get("name"): el.text.strip() for el in doc.iter("color")}
        at = raw.rindex(b"</resources>")
        block = []
        for p in inserts:
            name = p.locator[len("new:") :]
            if name in existing:
                if existing[name] != p.new_value:
                    raise StalePatch(f"{name} already defined as {existing[name]}")
                continue
            block.append(f'    <color name="{name}">{p.new_value}</color>\n')
        if block:
            # keep the closing tag on its own line
            line_start = raw.rfind(b"\n", 0, at) + 1
            pos = line_start if raw[line_start:at].strip() == b"" else at
            edits.append((pos, pos, "".join(block).encode("utf-8")))
    return splice(raw, edits)


def apply_patches(root: str | Path, patches: list[Patch]) -> list[str]:
    """Apply patches in place; every file is validated before any is written."""
    root = Path(root)
    by_file: dict[str, list[Patch]] = {}
    for p in patches:
        by_file.setdefault(p.file, []).append(p)
    staged = {}
    for rel in sorted(by_file):
        path = root / rel
        raw = path.read_bytes() if path.exists() else None
        staged[rel] = _edit_file(raw, path, by_file[rel])
    for rel, data in staged.items():
        _atomic_write(root / rel, data)
    return sorted(staged)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Verification:
    issue_index: int
    contrast: float
    passed: bool


def _effective_color(tree: ResourceTree, p: Patch, bg: Srgb8) -> Srgb8 | None:
    path = tree.root / p.file
    if not path.exists():
        return None
    if p.kind is TargetKind.SMALI_CONST:
        lines = path.read_text(encoding="utf-8").splitlines()
        n = int(p.locator[1:]) - 1
        try:
            return smali_const_color(lines[n].strip())[0]
        except (IndexError, ValueError):
            return None
    if p.kind is TargetKind.DRAWABLE_FILE:
        return dominant_foreground(path.read_bytes(), path, bg)
    try:
        if p.is_insertion:
            return resolve_color_reference(f"@color/{p.locator[len('new:'):]}", tree).color
        doc = tree.doc(path)
        el = doc.at(p.locator)
        value = doc.read_span(doc.attr_span(el, p.attribute) if p.attribute else doc.text_span(el))
        return resolve_color_reference(value, tree).color
    except (ContrastMendError, KeyError, ValueError):
        return None


def verify(root: str | Path, report: PatchReport) -> list[Verification]:
    """Recompute contrast for every patched issue against the files on disk."""
    tree = ResourceTree(root)
    per_issue: dict[int, float] = {}
    for p in report.patches:
        for idx in p.covers:
            info = report.issues[idx]
            bg = Srgb8.from_hex(info["background"])
            color = _effective_color(tree, p, bg)
            ratio = contrast_ratio(color, bg) if color is not None else 0.0
            per_issue[idx] = min(per_issue.get(idx, ratio), ratio)
    return [
        Verification(idx, ratio, ratio >= float(report.issues[idx]["required"]))
        for idx, ratio in sorted(per_issue.items())
    ]


# ---------------------------------------------------------------------------
# whole-app entry points


def repair_app(
    app_dir: str | Path,
    report: Report,
    db: ReferenceDb,
    out_dir: str | Path | None = None,
    skip: Iterable[int] = (),
) -> tuple[Path, PatchReport]:
    """Plan against ``app_dir``, then write the repaired tree to ``out_dir`` (or in place)."""
    app_dir = Path(app_dir)
    plan = plan_repairs(ResourceTree(app_dir), report, db, skip)
    target = app_dir
    if out_dir is not None:
        target = Path(out_dir)
        if target.resolve() != app_dir.resolve():
            if target.exists():
                shutil.rmtree(target)
            shutil.copytree(app_dir, target)
    if plan.patches:
        apply_patches(target, plan.patches)
    return target, plan


def collect_app_pairs(app_dir: str | Path, report: Report) -> list[ColorPairRecord]:
    """Issue-free component color pairs of one app: report colors plus screenshot crops."""
    recs = [
        ColorPairRecord(report.app_id, p.component_type, p.fg, p.bg, PairSource.REPORT_COLORS) for p in report.passed
    ]
    flagged_ids = {i.resource_id for i in report.issues if i.resource_id}
    flagged_bounds = {i.bounds for i in report.issues if i.bounds}
    for page in report.pages:
        dump_path = report.resolve(page.dump)
        shot_path = report.resolve(page.screenshot)
        if dump_path is None or shot_path is None or not dump_path.exists() or not shot_path.exists():
            continue
        tree = parse_ui_dump(dump_path.read_text(encoding="utf-8"))
        pixels = load_image(shot_path)
        for node, _ in tree.walk():
            if node.children or node.class_name == "hierarchy":
                continue
            if node.resource_id in flagged_ids or node.bounds in flagged_bounds:
                continue
            x1, y1, x2, y2 = node.bounds
            crop = pixels[max(y1, 0) : y2, max(x1, 0) : x2]
            if crop.size == 0:
                continue
            try:
                fg, bg = extract_dominant_pair(crop)
            except Monochrome:
                continue
            recs.append(
                ColorPairRecord(report.app_id, component_type_of(node.class_name), fg, bg,
                                PairSource.SCREENSHOT_EXTRACTION)
            )
    return recs


def build_db(apps_dir: str | Path) -> ReferenceDb:
    from .reports import read_report

    db = ReferenceDb()
    for app in sorted(Path(apps_dir).iterdir()):
        report_path = app / "report.json"
        if not report_path.is_file():
            continue
        report = read_report(report_path)
        if not report.app_id:
            report.app_id = app.name
        db.ingest_all(collect_app_pairs(app, report))
    return db
