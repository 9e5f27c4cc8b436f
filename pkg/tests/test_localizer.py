import pytest

from contrast_mend.colors import Srgb8
from contrast_mend.errors import (
    Ambiguous,
    CycleDetected,
    DanglingReference,
    DrawableNotFound,
    NoRepairableAttribute,
    NotFound,
    NoText,
)
from contrast_mend.localizer import (
    TargetKind,
    attribute_set_for,
    color_reference_sites,
    locate_smali_settextcolor,
    resolve_by_bounds,
    resolve_by_id,
    resolve_color_reference,
    resolve_drawable,
    rewrite_smali_const,
    scan_smali_settextcolor,
    smali_const_color,
    smali_literal,
)
from contrast_mend.reports import IssueKind, parse_ui_dump
from contrast_mend.resources import ResourceTree
from contrast_mend.xmldoc import XmlDocument, splice

from treeutil import layout, values, write_tree


@pytest.fixture
def tree(tmp_path):
    write_tree(tmp_path, {
        "res/layout/main.xml": layout(
            '  <TextView android:id="@+id/title" android:text="@string/login_label" android:textColor="#298670"/>\n'
            '  <Button android:id="@+id/go" android:text="Go" android:textColor="@color/primaryText"/>\n'
            '  <TextView android:id="@+id/cap" android:text="Caption" style="@style/Caption.Small"/>\n'
            '  <EditText android:id="@+id/query" android:textColor="#CCCCCC"/>\n'
            '  <TextView android:id="@+id/plain" android:text="OK"/>\n'
            '  <TextView android:id="@+id/plain2" android:text="OK"/>\n'
            '  <ImageButton android:id="@+id/send" android:src="@drawable/statsimg"/>\n'
            '  <View android:id="@+id/other" android:background="@color/primaryText"/>\n'
        ),
        "res/layout-sw600dp/main.xml": layout('  <TextView android:id="@+id/title" android:textColor="#298670"/>\n'),
        "res/values/strings.xml": values('  <string name="login_label">Login</string>\n'),
        "res/values/colors.xml": values(
            '  <color name="primaryText">@color/brand</color>\n'
            '  <color name="brand">#112233</color>\n'
            '  <color name="loop_a">@color/loop_b</color>\n'
            '  <color name="loop_b">@color/loop_a</color>\n'
        ),
        "res/values/styles.xml": values(
            '  <style name="Caption"><item name="android:textColor">#AAAAAA</item></style>\n'
            '  <style name="Caption.Small"><item name="android:textSize">10sp</item></style>\n'
        ),
        "res/drawable/statsimg.png": b"\x89PNG fake",
        "res/drawable-xhdpi/statsimg.png": b"\x89PNG fake2",
    })
    return ResourceTree(tmp_path)


def one(tree, rid):
    return resolve_by_id(rid, tree.layouts())


def test_resolve_by_id_strips_package(tree):
    found = one(tree, "com.app:id/title")
    assert {loc.file.parent.name for loc in found} == {"layout", "layout-sw600dp"}
    with pytest.raises(NotFound):
        one(tree, "missing")


def test_resolve_by_bounds_through_string_resource(tree):
    dump = parse_ui_dump('<node class="android.widget.TextView" bounds="[0,0][10,10]" text="Login"/>')
    (loc,) = resolve_by_bounds((0, 0, 10, 10), dump, tree.layouts(), tree)
    assert loc.element.get("android:id") == "@+id/title"


def test_resolve_by_bounds_failures(tree):
    ok = parse_ui_dump('<node class="android.widget.TextView" bounds="[0,0][10,10]" text="OK"/>')
    with pytest.raises(Ambiguous):
        resolve_by_bounds((0, 0, 10, 10), ok, tree.layouts(), tree)
    blank = parse_ui_dump('<node class="android.widget.ImageView" bounds="[0,0][10,10]"/>')
    with pytest.raises(NoText):
        resolve_by_bounds((0, 0, 10, 10), blank, tree.layouts(), tree, image=True)
    with_id = parse_ui_dump('<node class="android.widget.ImageButton" resource-id="com.app:id/send" bounds="[0,0][10,10]"/>')
    (loc,) = resolve_by_bounds((0, 0, 10, 10), with_id, tree.layouts(), tree, image=True)
    assert loc.tag == "ImageButton"


def test_direct_attribute_target(tree):
    loc = one(tree, "title")[0]
    (t,) = attribute_set_for(IssueKind.TEXT_CONTRAST, loc, tree)
    assert (t.kind, t.attribute, t.current_value) == (TargetKind.XML_ATTRIBUTE, "android:textColor", "#298670")


def test_color_resource_target_follows_chain(tree):
    (t,) = attribute_set_for(IssueKind.TEXT_CONTRAST, one(tree, "go")[0], tree)
    assert t.kind is TargetKind.COLOR_RESOURCE and t.file == "res/values/colors.xml"
    assert t.current_value == "#112233" and t.chain == ("primaryText", "brand")
    assert t.referrer.attribute == "android:textColor"
    # the View background also points at the chain head
    assert color_reference_sites(t, tree) == [("res/layout/main.xml", "0/7", "android:background")]


def test_style_item_target_via_implicit_parent(tree):
    (t,) = attribute_set_for(IssueKind.TEXT_CONTRAST, one(tree, "cap")[0], tree)
    assert t.kind is TargetKind.STYLE_ITEM and t.current_value == "#AAAAAA" and t.file == "res/values/styles.xml"


def test_edittext_yields_no_targets(tree):
    assert attribute_set_for(IssueKind.TEXT_CONTRAST, one(tree, "query")[0], tree) == []


def test_no_repairable_attribute(tree):
    with pytest.raises(NoRepairableAttribute):
        attribute_set_for(IssueKind.TEXT_CONTRAST, one(tree, "plain")[0], tree)


def test_image_targets_every_density(tree):
    targets = attribute_set_for(IssueKind.IMAGE_CONTRAST, one(tree, "send")[0], tree)
    assert sorted(t.file for t in targets) == ["res/drawable-xhdpi/statsimg.png", "res/drawable/statsimg.png"]
    assert all(t.kind is TargetKind.DRAWABLE_FILE and t.current_value.startswith("sha256:") for t in targets)
    assert [p.name for p in resolve_drawable("@drawable/statsimg", tree)] == ["statsimg.png", "statsimg.png"]
    with pytest.raises(DrawableNotFound):
        resolve_drawable("@drawable/nothing", tree)


def test_color_reference_resolution(tree):
    r = resolve_color_reference("#FF0000", tree)
    assert r.color == Srgb8(255, 0, 0) and r.chain == ()
    r = resolve_color_reference("@color/primaryText", tree)
    assert r.color == Srgb8(0x11, 0x22, 0x33) and r.chain == ("primaryText", "brand")
    with pytest.raises(DanglingReference):
        resolve_color_reference("@color/missing", tree)
    with pytest.raises(CycleDetected):
        resolve_color_reference("@color/loop_a", tree)
    assert resolve_color_reference("@android:color/white", tree).color == Srgb8(255, 255, 255)


def test_locators_stable(tree):
    path = tree.root / "res/layout/main.xml"
    a = XmlDocument.load(path).locators()
    b = XmlDocument(path.read_bytes()).locators()
    assert a == b and a[:3] == ["0", "0/0", "0/1"]


def test_splice_minimal_edit(tree):
    doc = XmlDocument.load(tree.root / "res/layout/main.xml")
    el = doc.at("0/0")
    span = doc.attr_span(el, "android:textColor")
    out = splice(doc.raw, [(span[0], span[1], b"#000000")])
    assert out.replace(b"#000000", b"#298670", 1) == doc.raw


SMALI = """.method public onCreate(Landroid/os/Bundle;)V
    .locals 3
    const v0, 0x7f0a0001
    invoke-virtual {p0, v0}, Lcom/x/Main;->findViewById(I)Landroid/view/View;
    move-result-object v0
    check-cast v0, Landroid/widget/TextView;
    const v1, -0x1
    invoke-virtual {v0, v1}, Landroid/widget/TextView;->setTextColor(I)V
    const v2, 0x7f0a0002
    invoke-virtual {p0, v2}, Lcom/x/Main;->findViewById(I)Landroid/view/View;
    move-result-object v2
    const v1, -0x1000000
    invoke-virtual {v2, v1}, Landroid/widget/TextView;->setTextColor(I)V
    invoke-static {}, Lcom/x/Colors;->muted()I
    move-result v1
    invoke-virtual {v0, v1}, Landroid/widget/TextView;->setTextColor(I)V
    return-void
.end method
"""


def test_smali_scan_finds_only_constant_feeds():
    assert scan_smali_settextcolor(SMALI, 0x7F0A0001) == [(7, "const v1, -0x1")]
    assert scan_smali_settextcolor(SMALI, 0x7F0A0002) == [(12, "const v1, -0x1000000")]
    assert scan_smali_settextcolor(SMALI, 0x7F0A0003) == []


def test_smali_label_clears_constants():
    text = SMALI.replace("    check-cast v0", "    :cond_0\n    check-cast v0").replace(
        "    invoke-virtual {v0, v1}, Landroid/widget/TextView;->setTextColor(I)V\n    const v2",
        "    invoke-virtual {v0, v1}, Landroid/widget/TextView;->setTextColor(I)V\n    const v2", 1)
    # the const still follows the label inside the same block
    assert scan_smali_settextcolor(text, 0x7F0A0001) == [(8, "const v1, -0x1")]
    moved = SMALI.replace("    const v1, -0x1\n", "    const v1, -0x1\n    :goto_0\n", 1)
    assert scan_smali_settextcolor(moved, 0x7F0A0001) == []


def test_locate_smali_uses_public_ids(tmp_path):
    write_tree(tmp_path, {
        "res/values/public.xml": values('  <public type="id" name="title" id="0x7f0a0001"/>\n'),
        "smali/com/x/Main.smali": SMALI,
    })
    (t,) = locate_smali_settextcolor("com.x:id/title", ResourceTree(tmp_path))
    assert (t.kind, t.file, t.locator) == (TargetKind.SMALI_CONST, "smali/com/x/Main.smali", "L7")


def test_smali_literals():
    assert smali_literal(0xFFFFFFFF) == "-0x1"
    assert smali_literal(0xFF000000) == "-0x1000000"
    assert smali_literal(0x80FF0000) == "-0x7f010000"
    assert smali_const_color("const v1, -0x1") == (Srgb8(255, 255, 255), 255)
    assert smali_const_color("const/high16 v1, -0x1000000") == (Srgb8(0, 0, 0), 255)
    assert rewrite_smali_const("const/high16 v3, -0x1000000", Srgb8(0x44, 0x44, 0x44)) == "const v3, -0xbbbbbc"
    c, a = smali_const_color(rewrite_smali_const("const v0, 0x80ff0000", Srgb8(1, 2, 3)))
    assert (c, a) == (Srgb8(1, 2, 3), 0x80)
