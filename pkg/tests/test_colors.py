import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contrast_mend.colors import (
    BLACK,
    WHITE,
    Hsv,
    SaturationLevel,
    Srgb8,
    cone_distance,
    contrast_ratio,
    contrast_threshold,
    format_color,
    hsv_to_rgb,
    hue_consistent,
    hue_diff,
    is_neutral,
    parse_color,
    relative_luminance,
    rgb_to_hsv,
    saturation_level,
)

import oracles

channel = st.integers(0, 255)
colors = st.builds(Srgb8, channel, channel, channel)


def test_rgb_to_hsv_examples():
    assert rgb_to_hsv(Srgb8(255, 0, 0)) == Hsv(0.0, 1.0, 1.0)
    gray = rgb_to_hsv(Srgb8(128, 128, 128))
    assert (gray.h, gray.s) == (0.0, 0.0) and gray.v == pytest.approx(0.50196, abs=1e-5)
    dark_red = rgb_to_hsv(Srgb8(64, 32, 32))
    assert dark_red.h == 0.0 and dark_red.s == pytest.approx(0.5) and dark_red.v == pytest.approx(0.25098039, abs=1e-8)


def test_negative_hue_wraps():
    # magenta-ish red: G < B on the R-max branch
    h = rgb_to_hsv(Srgb8(255, 0, 10)).h
    assert 0 <= h < 360 and h == pytest.approx(360 - 60 * 10 / 255)


def test_hsv_to_rgb_examples():
    assert hsv_to_rgb(Hsv(0, 1, 1)) == Srgb8(255, 0, 0)
    assert hsv_to_rgb(Hsv(0, 0, 1)) == WHITE
    back = rgb_to_hsv(hsv_to_rgb(Hsv(120, 0.5, 0.5)))
    assert back.h == pytest.approx(120, abs=1.0)
    assert back.s == pytest.approx(0.5, abs=1 / 255 * 2)
    assert back.v == pytest.approx(0.5, abs=1 / 255)


def test_hsv_grid_round_trip():
    # 36 hues x 11 saturations x 11 values
    worst = 0.0
    for hi in range(36):
        for si in range(11):
            for vi in range(11):
                x = Hsv(hi * 10.0, si / 10, vi / 10)
                y = rgb_to_hsv(hsv_to_rgb(x))
                assert abs(y.v - x.v) <= 1 / 255 + 1e-12
                if x.v > 0:
                    # saturation is a ratio, so one count of rounding moves it by ~1/(255 v)
                    assert abs(y.s - x.s) <= 1 / (255 * x.v) + 1e-12
                if x.s > 0 and x.v > 0:
                    worst = max(worst, hue_diff(y.h, x.h) * x.s * x.v)
    # hue error scales inversely with chroma; in chroma units it stays under one count
    assert worst <= 60 / 255 + 1e-9


@given(colors)
def test_round_trip_within_one_count(c):
    back = hsv_to_rgb(rgb_to_hsv(c))
    assert max(abs(back.r - c.r), abs(back.g - c.g), abs(back.b - c.b)) <= 1


@given(colors)
def test_matches_direct_transcription(c):
    h, s, v = oracles.hsv_direct(c.r, c.g, c.b)
    got = rgb_to_hsv(c)
    assert got.h == pytest.approx(h, abs=1e-9)
    assert got.s == pytest.approx(s, abs=1e-9)
    assert got.v == pytest.approx(v, abs=1e-9)


def test_luminance_examples():
    assert relative_luminance(BLACK) == 0.0
    assert relative_luminance(WHITE) == pytest.approx(1.0, abs=1e-12)
    # frozen from the oracle
    assert relative_luminance(Srgb8(118, 118, 118)) == pytest.approx(0.18116424424986022, abs=1e-12)


@given(colors)
def test_luminance_matches_oracle(c):
    assert relative_luminance(c) == pytest.approx(oracles.luminance(c.r, c.g, c.b), abs=1e-12)


def test_contrast_examples():
    assert contrast_ratio(WHITE, BLACK) == pytest.approx(21.0, abs=1e-9)
    assert contrast_ratio(Srgb8.from_hex("#767676"), WHITE) == pytest.approx(4.542224959605253, abs=1e-9)


@given(colors, colors)
def test_contrast_symmetric_and_bounded(a, b):
    r = contrast_ratio(a, b)
    assert r == contrast_ratio(b, a)
    assert 1.0 <= r <= 21.0 + 1e-9
    assert contrast_ratio(a, a) == 1.0


@pytest.mark.parametrize(
    "size,bold,image,expected",
    [(12, False, False, 4.5), (18, False, False, 3.0), (14, True, False, 3.0), (14, False, False, 4.5),
     (13.9, True, False, 4.5), (None, False, False, 4.5), (8, False, True, 3.0)],
)
def test_threshold_table(size, bold, image, expected):
    assert contrast_threshold(size, bold, image=image) == expected


def test_saturation_buckets():
    assert saturation_level(0.2) is SaturationLevel.LOW
    assert saturation_level(0.33) is SaturationLevel.LOW
    assert saturation_level(0.34) is SaturationLevel.MEDIUM
    assert saturation_level(0.67) is SaturationLevel.MEDIUM
    assert saturation_level(0.68) is SaturationLevel.HIGH
    assert saturation_level(1.0) is SaturationLevel.HIGH


@given(st.floats(0, 1), st.floats(0, 1))
def test_saturation_level_monotone(a, b):
    lo, hi = sorted((a, b))
    assert saturation_level(lo) <= saturation_level(hi)


def test_neutral_examples():
    assert is_neutral(BLACK)
    assert not is_neutral(Srgb8(255, 0, 0))
    assert is_neutral(Srgb8(250, 245, 245))


def test_hue_consistency_examples():
    assert hue_consistent(10, 350)
    assert not hue_consistent(0, 31)


@given(st.floats(0, 359.999), st.floats(0, 359.999))
def test_hue_consistency_reflexive_symmetric(a, b):
    assert hue_consistent(a, a)
    assert hue_consistent(a, b) == hue_consistent(b, a)
    assert 0 <= hue_diff(a, b) <= 180


@given(colors, colors)
def test_cone_distance_matches_oracle(a, b):
    got = cone_distance(rgb_to_hsv(a), rgb_to_hsv(b))
    assert got == pytest.approx(oracles.cone((a.r, a.g, a.b), (b.r, b.g, b.b)), abs=1e-9)


@pytest.mark.parametrize(
    "text,rgb,alpha",
    [("#fff", (255, 255, 255), ""), ("#8000", (0, 0, 0), "88"), ("#298670", (0x29, 0x86, 0x70), ""),
     ("#80298670", (0x29, 0x86, 0x70), "80")],
)
def test_parse_color_forms(text, rgb, alpha):
    c, a = parse_color(text)
    assert (c.r, c.g, c.b) == rgb and a == alpha


def test_format_keeps_alpha_and_uppercases():
    c, a = parse_color("#80abcdef")
    assert format_color(c, a) == "#80ABCDEF"
    assert Srgb8.from_hex("#abcdef").hex == "#ABCDEF"


@pytest.mark.parametrize("bad", ["red", "#12", "#GGGGGG", "123456"])
def test_parse_color_rejects(bad):
    with pytest.raises(ValueError):
        parse_color(bad)


def test_value_validation():
    with pytest.raises(ValueError):
        Srgb8(256, 0, 0)
    with pytest.raises(ValueError):
        Hsv(360.0, 0.5, 0.5)
    with pytest.raises(ValueError):
        Hsv(0.0, 1.5, 0.5)
    assert math.isclose(rgb_to_hsv(Srgb8(0, 0, 255)).h, 240.0)
