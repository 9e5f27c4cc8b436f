import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contrast_mend.colors import Srgb8
from contrast_mend.errors import MalformedDump, MalformedReport
from contrast_mend.reports import (
    IssueKind,
    correct_fg_bg_swap,
    find_node,
    load_report,
    parse_bounds,
    parse_issue_report,
    parse_ui_dump,
    read_report,
)

YELLOW, TEAL = Srgb8.from_hex("#EDF064"), Srgb8.from_hex("#298670")


def report(*issues, **extra):
    return json.dumps({"app_id": "com.x", "issues": list(issues), **extra})


def text_issue(**kw):
    base = {"type": "TextContrast", "activity": "Main", "foreground": "#298670", "background": "#EDF064"}
    base.update(kw)
    return base


def test_parse_minimal_entry():
    (rec,) = parse_issue_report(report(text_issue(resource_id="com.x:id/title")))
    assert rec.issue_kind is IssueKind.TEXT_CONTRAST and rec.resource_id == "com.x:id/title"
    assert rec.required_contrast == 4.5 and rec.fg == TEAL


def test_parse_bounds_only_entry():
    (rec,) = parse_issue_report(report(text_issue(bounds="[0,48][1080,195]")))
    assert rec.bounds == (0, 48, 1080, 195) and rec.resource_id is None


def test_large_text_threshold():
    (rec,) = parse_issue_report(report(text_issue(resource_id="t", required=3.0, text_size_pt=18)))
    assert rec.required_contrast == 3.0
    (rec,) = parse_issue_report(report(text_issue(resource_id="t", text_size_pt=14, bold=True)))
    assert rec.required_contrast == 3.0
    (rec,) = parse_issue_report(report({**text_issue(resource_id="i"), "type": "ImageContrast"}))
    assert rec.required_contrast == 3.0


def test_invalid_entries_become_warnings():
    doc = report(text_issue(resource_id="ok"), text_issue(), text_issue(resource_id="x", bounds="[5,5][1,1]"),
                 text_issue(resource_id="y", required=7.0), {"type": "Other"})
    rep = load_report(doc)
    assert [i.index for i in rep.issues] == [0]
    assert len(rep.warnings) == 4


def test_unknown_fields_ignored():
    (rec,) = parse_issue_report(report(text_issue(resource_id="t", vendor_score=3)))
    assert rec.resource_id == "t"


@pytest.mark.parametrize("doc", ["not json", "[]", '{"issues": 3}', "{}"])
def test_malformed_envelope(doc):
    with pytest.raises(MalformedReport):
        load_report(doc)


@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(1, 500), st.integers(1, 500))
def test_bounds_well_ordered(x, y, w, h):
    assert parse_bounds(f"[{x},{y}][{x + w},{y + h}]") == (x, y, x + w, y + h)
    with pytest.raises(ValueError):
        parse_bounds(f"[{x + w},{y}][{x},{y + h}]")


DUMP = """<?xml version="1.0"?>
<hierarchy rotation="0">
  <node class="android.widget.FrameLayout" bounds="[0,0][100,100]" resource-id="" text="" clickable="false">
    <node class="android.widget.TextView" bounds="[0,0][10,10]" resource-id="com.x:id/t" text="Login" clickable="true"/>
    <node class="android.widget.ImageView" bounds="[20,20][60,60]" text=""/>
  </node>
</hierarchy>"""


def test_parse_dump():
    root = parse_ui_dump(DUMP)
    frame = root.children[0]
    text, image = frame.children
    assert text.bounds == (0, 0, 10, 10) and text.clickable and text.text == "Login"
    assert image.resource_id is None and image.text is None
    assert max(d for _, d in root.walk()) == 2


def test_find_node_exact_then_enclosing():
    root = parse_ui_dump(DUMP)
    assert find_node(root, (0, 0, 10, 10)).text == "Login"
    assert find_node(root, (25, 25, 30, 30)).class_name == "android.widget.ImageView"
    assert find_node(root, (0, 0, 500, 500)) is None


def test_malformed_dump():
    with pytest.raises(MalformedDump):
        parse_ui_dump("<hierarchy><node")


def _page():
    px = np.zeros((20, 20, 4), dtype=np.uint8)
    px[...] = (YELLOW.r, YELLOW.g, YELLOW.b, 255)
    px[8:12, 2:18, :3] = (TEAL.r, TEAL.g, TEAL.b)
    return px


def test_swap_correction():
    (right,) = parse_issue_report(report(text_issue(bounds="[0,0][20,20]")))
    (wrong,) = parse_issue_report(report(text_issue(bounds="[0,0][20,20]", foreground="#EDF064", background="#298670")))
    assert correct_fg_bg_swap(right, _page()) == right
    fixed = correct_fg_bg_swap(wrong, _page())
    assert (fixed.fg, fixed.bg) == (TEAL, YELLOW)
    assert fixed.observed_contrast == wrong.observed_contrast
    assert correct_fg_bg_swap(fixed, _page()) == fixed
    assert correct_fg_bg_swap(wrong, None) == wrong


def test_corpus_reports_parse(corpus):
    for app in sorted(corpus.iterdir()):
        rep = read_report(app / "report.json")
        assert not rep.warnings
        expected = json.loads((app / "expected.json").read_text())
        assert [str(i.index) for i in rep.issues] == list(expected)
        # canonical re-serialization is stable
        again = [i.to_dict() for i in read_report(app / "report.json").issues]
        assert again == [i.to_dict() for i in rep.issues]
