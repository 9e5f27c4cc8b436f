import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from contrast_mend.colors import Srgb8
from contrast_mend.errors import NoForegroundPixels, NoMatchingPaint
from contrast_mend.images import (
    ImageKind,
    classify_image,
    dominant_foreground,
    encode_raster,
    read_raster,
    recolor_file_bytes,
    recolor_raster,
    recolor_vector,
)
from contrast_mend.reports import parse_ui_dump

SRC = Srgb8(0xCC, 0xCC, 0xCC)
DST = Srgb8(0x44, 0x44, 0x44)


def blend_oracle(p, src, dst, tol=16):
    d = max(abs(int(p[c]) - src[c]) for c in range(3))
    if d > tol:
        return tuple(int(x) for x in p[:3])
    t = 1 - d / (tol + 1)
    return tuple(math.floor(int(p[c]) + t * (dst[c] - int(p[c])) + 0.5) for c in range(3))


@pytest.mark.parametrize("attrs,kind", [
    ({"tag": "ImageButton"}, ImageKind.FUNCTIONAL),
    ({"tag": "android.widget.ImageButton"}, ImageKind.FUNCTIONAL),
    ({"tag": "ImageView", "android:clickable": "true"}, ImageKind.FUNCTIONAL),
    ({"tag": "ImageView", "android:onClick": "send"}, ImageKind.FUNCTIONAL),
    ({"tag": "ImageView"}, ImageKind.ORNAMENTAL),
    ({"tag": "ImageView", "android:clickable": "false"}, ImageKind.ORNAMENTAL),
])
def test_classify_image(attrs, kind):
    assert classify_image(attrs).kind is kind


def test_classify_uses_dump_clickable():
    node = parse_ui_dump('<node class="android.widget.ImageView" clickable="true" bounds="[0,0][1,1]"/>')
    c = classify_image({"tag": "ImageView"}, node)
    assert c.kind is ImageKind.FUNCTIONAL and c.evidence == ("dump:clickable",)


def test_exact_match_lands_on_target():
    px = np.zeros((2, 2, 4), np.uint8)
    px[..., :3] = (0xCC, 0xCC, 0xCC)
    px[..., 3] = (255, 128, 0, 7)[0]
    px[1, 1, 3] = 9
    out = recolor_raster(px, SRC, DST)
    assert (out[..., :3] == 0x44).all()
    assert (out[..., 3] == px[..., 3]).all()


def test_tolerance_edge():
    px = np.array([[[0xCC + 16, 0xCC, 0xCC, 255], [0xCC + 17, 0xCC, 0xCC, 255]]], np.uint8)
    out = recolor_raster(px, SRC, DST)
    assert tuple(out[0, 0, :3]) == blend_oracle(px[0, 0], (0xCC,) * 3, (0x44,) * 3)
    assert tuple(out[0, 1]) == tuple(px[0, 1])


def test_no_foreground_pixels():
    with pytest.raises(NoForegroundPixels):
        recolor_raster(np.zeros((3, 3, 4), np.uint8), SRC, DST)


@given(arrays(np.uint8, (6, 5, 4)), st.tuples(*[st.integers(0, 255)] * 3), st.tuples(*[st.integers(0, 255)] * 3))
def test_recolor_matches_closed_form(px, src, dst):
    px[0, 0, :3] = src
    out = recolor_raster(px, Srgb8(*src), Srgb8(*dst))
    assert out.dtype == np.uint8 and out.shape == px.shape
    assert (out[..., 3] == px[..., 3]).all()
    for y in range(px.shape[0]):
        for x in range(px.shape[1]):
            assert tuple(int(v) for v in out[y, x, :3]) == blend_oracle(px[y, x], src, dst)


VECTOR = """<vector xmlns:android="http://schemas.android.com/apk/res/android" android:width="24dp">
    <path android:fillColor="#80CCCCCC" android:pathData="M0,0h1"/>
    <path android:strokeColor = '#cccccc' android:pathData="M1,1h1"/>
    <path android:fillColor="@color/accent" android:pathData="M2,2h1"/>
    <path android:fillColor="#FF0000" android:pathData="M3,3h1"/>
</vector>
"""


def test_recolor_vector_keeps_alpha_and_references():
    out = recolor_vector(VECTOR, SRC, DST)
    assert 'android:fillColor="#80444444"' in out
    assert "android:strokeColor = '#444444'" in out
    assert '"@color/accent"' in out and '"#FF0000"' in out
    assert len(out.splitlines()) == len(VECTOR.splitlines())


def test_recolor_vector_no_match():
    with pytest.raises(NoMatchingPaint):
        recolor_vector(VECTOR, Srgb8(1, 2, 3), DST)
    with pytest.raises(ValueError):
        recolor_vector("<shape/>", SRC, DST)


@pytest.mark.parametrize("fmt,suffix", [("PNG", ".png"), ("WEBP", ".webp")])
def test_lossless_file_round_trip(fmt, suffix):
    rng = np.random.default_rng(3)
    px = rng.integers(0, 256, (8, 8, 4), dtype=np.uint8)
    px[2:6, 2:6] = (0xCC, 0xCC, 0xCC, 255)
    data = encode_raster(px, fmt)
    back, got_fmt = read_raster(data)
    assert got_fmt == fmt and (back == px).all()
    new, notes = recolor_file_bytes("x" + suffix, data, SRC, DST)
    assert notes == []
    out, _ = read_raster(new)
    assert (out == recolor_raster(px, SRC, DST)).all()


def test_jpeg_noted_as_lossy():
    px = np.zeros((8, 8, 4), np.uint8)
    px[...] = (0xCC, 0xCC, 0xCC, 255)
    _, notes = recolor_file_bytes("x.jpg", encode_raster(px, "JPEG"), SRC, DST)
    assert notes == ["lossy JPEG re-encode"]


def test_dominant_foreground_skips_background():
    px = np.zeros((4, 4, 4), np.uint8)
    px[...] = (255, 255, 255, 255)
    px[0, :2] = (0xCC, 0xCC, 0xCC, 255)
    data = encode_raster(px, "PNG")
    assert dominant_foreground(data, "a.png", Srgb8(255, 255, 255)) == SRC
    assert dominant_foreground(data, "a.png", SRC) == Srgb8(255, 255, 255)
    assert dominant_foreground(VECTOR.encode(), "a.xml", Srgb8(255, 255, 255)) == SRC
