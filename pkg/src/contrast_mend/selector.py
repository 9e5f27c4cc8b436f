"""Context-aware replacement color selection.

Candidates from the reference database are kept only when they share the
original's hue family and saturation level; the survivor closest to the
page's harmonic template wins. With no survivor, the original color itself
is adjusted: value only for neutral colors, hue/saturation for chromatic
ones, taking whichever of the two adjustment orders changes it least.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .colors import (
    HUE_TOLERANCE_DEG,
    Hsv,
    Srgb8,
    cone_distance,
    contrast_ratio,
    hsv_to_rgb,
    hue_consistent,
    is_neutral,
    relative_luminance,
    rgb_to_hsv,
    saturation_level,
)
from .errors import BothAbsent, Unsatisfiable
from .harmony import TemplateFit, hue_distance_to_template

HUE_STEP = 1.0
SAT_STEP = 0.01
VALUE_STEP = 1.0 / 255.0
VALUE_ESCALATION = 0.25


class Strategy(str, enum.Enum):
    REFERENCE_DB = "ReferenceDb"
    COMPLEMENTARY_NEUTRAL = "ComplementaryNeutral"
    COMPLEMENTARY_CHROMATIC = "ComplementaryChromatic"


@dataclass(frozen=True)
class SelectionInput:
    original_fg: Srgb8
    bg: Srgb8
    required_contrast: float
    candidates: tuple[Srgb8, ...] = ()
    template: TemplateFit | None = None

    def __post_init__(self):
        if self.required_contrast not in (3.0, 4.5):
            raise ValueError("required contrast must be 3.0 or 4.5")
        object.__setattr__(self, "candidates", tuple(self.candidates))


@dataclass(frozen=True)
class SelectionResult:
    color: Srgb8
    strategy: Strategy
    harmonic_distance: float | None = None
    escalated: bool = False
    considered: int = 0
    trail: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "color": self.color.hex,
            "strategy": self.strategy.value,
            "harmonic_distance": self.harmonic_distance,
            "escalated": self.escalated,
            "candidates_considered": self.considered,
            "trail": list(self.trail),
        }


def filter_consistent(candidates: Sequence[Srgb8], original: Srgb8) -> list[Srgb8]:
    hsv0 = rgb_to_hsv(original)
    level0 = saturation_level(hsv0.s)
    if is_neutral(original):
        return [c for c in candidates if is_neutral(c) and saturation_level(rgb_to_hsv(c).s) == level0]
    kept = []
    for c in candidates:
        if is_neutral(c):
            continue
        hsv = rgb_to_hsv(c)
        if hue_consistent(hsv.h, hsv0.h) and saturation_level(hsv.s) == level0:
            kept.append(c)
    return kept


def harmonic_distance(color: Srgb8, template: TemplateFit) -> float:
    # neutral colors add no hue to the page, so they sit inside every template
    if is_neutral(color):
        return 0.0
    return hue_distance_to_template(template.kind, template.alpha, rgb_to_hsv(color).h)


def _nearest_first(n: int) -> np.ndarray:
    """0, +1, -1, +2, -2, ... up to +/-n."""
    out = [0]
    for k in range(1, n + 1):
        out += [k, -k]
    return np.array(out, dtype=np.float64)


def _value_offsets(v0: float, span: float) -> np.ndarray:
    steps = int(math.floor(span * 255.0 + 1e-9))
    vs = v0 + _nearest_first(steps) / 255.0
    return vs[(vs >= -1e-12) & (vs <= 1.0 + 1e-12)].clip(0.0, 1.0)


def _saturation_grid(s0: float) -> np.ndarray:
    level = saturation_level(s0)
    ss = s0 + _nearest_first(100) * SAT_STEP
    keep = (ss >= 0.0) & (ss <= 1.0)
    ss = ss[keep]
    return ss[[saturation_level(s) == level for s in ss]]


def _hue_grid(h0: float) -> np.ndarray:
    return np.mod(h0 + _nearest_first(int(HUE_TOLERANCE_DEG / HUE_STEP)) * HUE_STEP, 360.0)


def _sweep(original: Srgb8, bg: Srgb8, required: float, hue_outer: bool, v_span: float) -> Srgb8 | None:
    hsv0 = rgb_to_hsv(original)
    hues = _hue_grid(hsv0.h)
    sats = _saturation_grid(hsv0.s)
    vals = _value_offsets(hsv0.v, v_span)
    if hue_outer:
        vv, hh, ss = np.meshgrid(vals, hues, sats, indexing="ij")
    else:
        vv, ss, hh = np.meshgrid(vals, sats, hues, indexing="ij")
    hh, ss, vv = hh.ravel(), ss.ravel(), vv.ravel()
    idx = _kernels.first_feasible(
        hh,
        ss,
        vv,
        bg_lum=relative_luminance(bg),
        required=required,
        h0=hsv0.h,
        level0=int(saturation_level(hsv0.s)),
        chromatic=True,
        hue_tol=HUE_TOLERANCE_DEG,
    )
    if idx < 0:
        return None
    return hsv_to_rgb(Hsv(float(hh[idx]), float(ss[idx]), float(vv[idx])))


def adjust_hs(original: Srgb8, bg: Srgb8, required: float, *, v_span: float = 0.0) -> Srgb8 | None:
    """Hue-major nearest-first search; value moves only when ``v_span`` > 0."""
    return _sweep(original, bg, required, hue_outer=True, v_span=v_span)


def adjust_sh(original: Srgb8, bg: Srgb8, required: float, *, v_span: float = 0.0) -> Srgb8 | None:
    return _sweep(original, bg, required, hue_outer=False, v_span=v_span)


def adjust_v_neutral(original: Srgb8, bg: Srgb8, required: float) -> Srgb8:
    hsv0 = rgb_to_hsv(original)
    k0 = int(round(hsv0.v * 255.0))
    for d in range(0, 256):
        hits = []
        for k in (k0 - d, k0 + d) if d else (k0,):
            if 0 <= k <= 255:
                c = hsv_to_rgb(Hsv(hsv0.h, hsv0.s, k / 255.0))
                ratio = contrast_ratio(c, bg)
                if ratio >= required:
                    hits.append((ratio, c))
        if hits:
            # both directions tie on distance: take the one with more headroom
            return max(hits, key=lambda t: (t[0], -t[1].packed()))[1]
    raise Unsatisfiable(f"no value of {original.hex} reaches {required} against {bg.hex}")


def min_changed(original: Srgb8, a: Srgb8 | None, b: Srgb8 | None) -> Srgb8:
    if a is None and b is None:
        raise BothAbsent("neither adjustment produced a color")
    if b is None:
        return a
    if a is None:
        return b
    hsv0 = rgb_to_hsv(original)
    if cone_distance(hsv0, rgb_to_hsv(b)) < cone_distance(hsv0, rgb_to_hsv(a)):
        return b
    return a


def select_optimal(inp: SelectionInput) -> SelectionResult:
    original, bg, required = inp.original_fg, inp.bg, inp.required_contrast
    hsv0 = rgb_to_hsv(original)
    trail = []

    # stored pairs matched a nearby bg, not this exact one: re-check before ranking
    usable = [c for c in inp.candidates if contrast_ratio(c, bg) >= required]
    pool = filter_consistent(usable, original)
    trail.append(f"candidates={len(inp.candidates)} contrast_ok={len(usable)} consistent={len(pool)}")

    if pool:
        ranked = []
        for pos, c in enumerate(pool):
            dist = harmonic_distance(c, inp.template) if inp.template is not None else None
            ranked.append((dist if dist is not None else 0.0, cone_distance(hsv0, rgb_to_hsv(c)), pos, c, dist))
        best = min(ranked)
        return SelectionResult(
            best[3], Strategy.REFERENCE_DB, harmonic_distance=best[4], considered=len(pool), trail=tuple(trail)
        )

    if is_neutral(original):
        trail.append("neutral: adjust value")
        try:
            color = adjust_v_neutral(original, bg, required)
        except Unsatisfiable as exc:
            raise Unsatisfiable(str(exc), trail) from exc
        return SelectionResult(color, Strategy.COMPLEMENTARY_NEUTRAL, considered=0, trail=tuple(trail))

    trail.append("chromatic: adjust hue/saturation")
    a = adjust_hs(original, bg, required)
    b = adjust_sh(original, bg, required)
    escalated = False
    if a is None and b is None:
        trail.append(f"escalate: value sweep +/-{VALUE_ESCALATION}")
        escalated = True
        a = adjust_hs(original, bg, required, v_span=VALUE_ESCALATION)
        b = adjust_sh(original, bg, required, v_span=VALUE_ESCALATION)
    if a is None and b is None:
        trail.append("no feasible color")
        raise Unsatisfiable(f"no color near {original.hex} reaches {required} against {bg.hex}", trail)
    color = min_changed(original, a, b)
    return SelectionResult(color, Strategy.COMPLEMENTARY_CHROMATIC, escalated=escalated, trail=tuple(trail))
