"""Hue-wheel harmonic templates and page fitting."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels
from .colors import Srgb8, hue_diff, is_neutral, rgb_to_hsv
from .errors import EmptyHistogram, EmptyPage

# relative tolerance below which two fit errors count as a tie
TIE_RTOL = 1e-9


class TemplateKind(str, enum.Enum):
    i = "i"
    V = "V"
    L = "L"
    I = "I"  # noqa: E741
    T = "T"
    Y = "Y"
    X = "X"
    N = "N"


@dataclass(frozen=True)
class HarmonicTemplate:
    kind: TemplateKind
    sectors: tuple[tuple[float, float], ...]  # (center offset, width) in degrees

    @property
    def total_width(self) -> float:
        return sum(w for _, w in self.sectors)


TEMPLATES: dict[TemplateKind, HarmonicTemplate] = {
    t.kind: t
    for t in (
        HarmonicTemplate(TemplateKind.i, ((0.0, 18.0),)),
        HarmonicTemplate(TemplateKind.V, ((0.0, 93.6),)),
        HarmonicTemplate(TemplateKind.L, ((0.0, 18.0), (90.0, 79.2))),
        HarmonicTemplate(TemplateKind.I, ((0.0, 18.0), (180.0, 18.0))),
        HarmonicTemplate(TemplateKind.T, ((0.0, 180.0),)),
        HarmonicTemplate(TemplateKind.Y, ((0.0, 93.6), (180.0, 18.0))),
        HarmonicTemplate(TemplateKind.X, ((0.0, 93.6), (180.0, 93.6))),
        HarmonicTemplate(TemplateKind.N, ()),
    )
}

# N is grayscale-only and never wins a fit on a chromatic histogram
CHROMATIC_KINDS = tuple(k for k in TemplateKind if k is not TemplateKind.N)


@dataclass(frozen=True)
class TemplateFit:
    kind: TemplateKind
    alpha: int
    fit_error: float


@dataclass(frozen=True)
class HueHistogram:
    bins: np.ndarray

    def __post_init__(self):
        if self.bins.shape != (360,) or (self.bins < 0).any():
            raise ValueError("histogram needs 360 non-negative bins")

    @property
    def total(self) -> float:
        return float(self.bins.sum())

    def rotated(self, delta: int) -> "HueHistogram":
        return HueHistogram(np.roll(self.bins, delta))


def page_hue_histogram(colors: Iterable[tuple[Srgb8, float]]) -> HueHistogram:
    """Saturation-weighted hue mass of a page; neutral colors contribute nothing."""
    bins = np.zeros(360)
    for color, weight in colors:
        if weight < 0:
            raise ValueError("weights must be non-negative")
        if is_neutral(color):
            continue
        hsv = rgb_to_hsv(color)
        bins[int(round(hsv.h)) % 360] += weight * hsv.s
    if not bins.any():
        raise EmptyPage("page has no chromatic color mass")
    return HueHistogram(bins)


def hue_distance_to_template(kind: TemplateKind, alpha: float, hue: float) -> float:
    """Angular distance from ``hue`` to the nearest sector of the rotated template."""
    template = TEMPLATES[TemplateKind(kind)]
    if not template.sectors:
        raise ValueError("the N template has no sectors")
    best = 180.0
    for offset, width in template.sectors:
        d = hue_diff(hue, alpha + offset) - width / 2.0
        best = min(best, max(d, 0.0))
    return best


@lru_cache(maxsize=1)
def distance_tables() -> np.ndarray:
    """Row k holds the distance of hue offsets 0..359 to template k at alpha 0."""
    tab = np.empty((len(CHROMATIC_KINDS), 360))
    for row, kind in enumerate(CHROMATIC_KINDS):
        for h in range(360):
            tab[row, h] = hue_distance_to_template(kind, 0.0, float(h))
    tab.setflags(write=False)
    return tab


def _better(err: float, width: float, alpha: int, best: tuple[float, float, int] | None) -> bool:
    if best is None:
        return True
    b_err, b_width, b_alpha = best
    scale = TIE_RTOL * max(1.0, abs(err), abs(b_err))
    if err < b_err - scale:
        return True
    if err > b_err + scale:
        return False
    return (width, alpha) < (b_width, b_alpha)


def select_best(errors: np.ndarray) -> TemplateFit:
    """Pick the minimum of a (kind x alpha) error grid with the documented tie rules."""
    best = None
    best_kind = None
    for row, kind in enumerate(CHROMATIC_KINDS):
        width = TEMPLATES[kind].total_width
        for alpha in range(360):
            err = float(errors[row, alpha])
            if _better(err, width, alpha, best):
                best = (err, width, alpha)
                best_kind = kind
    assert best is not None
    return TemplateFit(best_kind, best[2], best[0])


def fit_template(hist: HueHistogram) -> TemplateFit:
    if hist.total <= 0:
        raise EmptyHistogram("cannot fit an empty histogram")
    errors = _kernels.template_errors(hist.bins, distance_tables())
    return select_best(errors)


def fit_page(colors: Iterable[tuple[Srgb8, float]]) -> TemplateFit | None:
    """Fit a page's colors, or ``None`` if the page is entirely neutral."""
    try:
        return fit_template(page_hue_histogram(colors))
    except EmptyPage:
        return None
