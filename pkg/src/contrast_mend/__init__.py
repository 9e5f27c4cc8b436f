"""Automated repair of color-related accessibility issues in decompiled Android apps."""

from .colors import Hsv, SaturationLevel, Srgb8, contrast_ratio, contrast_threshold, relative_luminance, rgb_to_hsv, hsv_to_rgb
from .errors import ContrastMendError
from .harmony import TemplateFit, TemplateKind, fit_page, fit_template
from .pipeline import Patch, PatchReport, apply_patches, compute_repair_rate, plan_repairs, repair_app, verify
from .refdb import ColorPairRecord, ReferenceDb
from .reports import IssueKind, IssueRecord, load_report, read_report
from .selector import SelectionInput, SelectionResult, Strategy, select_optimal

__all__ = [
    "ColorPairRecord", "ContrastMendError", "Hsv", "IssueKind", "IssueRecord", "Patch", "PatchReport",
    "ReferenceDb", "SaturationLevel", "SelectionInput", "SelectionResult", "Srgb8", "Strategy", "TemplateFit",
    "TemplateKind", "apply_patches", "compute_repair_rate", "contrast_ratio", "contrast_threshold", "fit_page",
    "fit_template", "hsv_to_rgb", "load_report", "plan_repairs", "read_report", "relative_luminance", "repair_app",
    "rgb_to_hsv", "select_optimal", "verify",
]
