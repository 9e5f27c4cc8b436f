"""Hot numeric loops, each with a numba path and a pure-numpy path.

The numba path is used when numba imports and ``CONTRAST_MEND_DISABLE_NUMBA``
is unset (or ``0``). Both paths are always importable so tests and the
benchmark can compare them directly. The sweep and recolor kernels agree
bit for bit because both paths share the luminance table and perform the
same float operations; template error sums may differ in the last ulp
because numpy reduces in a different order, which the tie tolerance of the
fitter absorbs.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .colors import LINEAR_TABLE, NEUTRAL_MAX_SATURATION

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("CONTRAST_MEND_DISABLE_NUMBA", "0").lower() in ("", "0", "false", "no")

LIN = np.array(LINEAR_TABLE, dtype=np.float64)


def _njit(fn):
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# harmonic template fitting: errors[k, a] = sum_h w[h] * dist_k[(h - a) % 360]


def template_errors_np(weights: np.ndarray, dist: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(weights)
    w = weights[nz]
    alphas = np.arange(360)
    idx = (nz[None, :] - alphas[:, None]) % 360
    out = np.empty((dist.shape[0], 360))
    for k in range(dist.shape[0]):
        out[k] = (dist[k][idx] * w[None, :]).sum(axis=1)
    return out


def _template_errors_loop(weights, dist):
    nk = dist.shape[0]
    out = np.zeros((nk, 360))
    nz = np.flatnonzero(weights)
    for k in range(nk):
        for a in range(360):
            acc = 0.0
            for j in range(nz.shape[0]):
                h = nz[j]
                acc += dist[k, (h - a) % 360] * weights[h]
            out[k, a] = acc
    return out


template_errors_nb = _njit(_template_errors_loop)


# ---------------------------------------------------------------------------
# nearest-first HSV sweep: first grid point whose rounded RGB meets contrast
# and stays in the original's hue family and saturation level


def _level(s):
    if s <= 0.33:
        return 0
    if s <= 0.67:
        return 1
    return 2


def _hsv_to_rgb_scalar(h, s, v):
    if s == 0.0:
        k = math.floor(v * 255.0 + 0.5)
        return k, k, k
    hh = (h % 360.0) / 60.0
    i = int(math.floor(hh))
    f = hh - i
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    i = i % 6
    if i == 0:
        r, g, b = v, t, p
    elif i == 1:
        r, g, b = q, v, p
    elif i == 2:
        r, g, b = p, v, t
    elif i == 3:
        r, g, b = p, q, v
    elif i == 4:
        r, g, b = t, p, v
    else:
        r, g, b = v, p, q
    return math.floor(r * 255.0 + 0.5), math.floor(g * 255.0 + 0.5), math.floor(b * 255.0 + 0.5)


def _rgb_to_hs_scalar(ri, gi, bi):
    r = ri / 255.0
    g = gi / 255.0
    b = bi / 255.0
    mx = max(r, g, b)
    mn = min(r, g, b)
    if mx == mn:
        h = 0.0
    elif mx == r:
        h = 60.0 * (g - b) / (mx - mn)
    elif mx == g:
        h = 60.0 * (b - r) / (mx - mn) + 120.0
    else:
        h = 60.0 * (r - g) / (mx - mn) + 240.0
    if h < 0.0:
        h += 360.0
    if h >= 360.0:
        h -= 360.0
    s = 0.0 if mx == 0.0 else (mx - mn) / mx
    return h, s


if HAVE_NUMBA:
    _level_nb = numba.njit(cache=True)(_level)
    _hsv_to_rgb_nb = numba.njit(cache=True)(_hsv_to_rgb_scalar)
    _rgb_to_hs_nb = numba.njit(cache=True)(_rgb_to_hs_scalar)

    @numba.njit(cache=True, nogil=True)
    def _feasible_nb(h, s, v, lin, bg_lum, required, h0, level0, chromatic, hue_tol, neutral_max):
        r, g, b = _hsv_to_rgb_nb(h, s, v)
        lum = 0.2126 * lin[int(r)] + 0.7152 * lin[int(g)] + 0.0722 * lin[int(b)]
        hi = max(lum, bg_lum)
        lo = min(lum, bg_lum)
        if (hi + 0.05) / (lo + 0.05) < required:
            return False
        if not chromatic:
            return True
        hh, ss = _rgb_to_hs_nb(r, g, b)
        if ss <= neutral_max:
            return False
        if _level_nb(ss) != level0:
            return False
        d = abs(hh - h0) % 360.0
        if d > 180.0:
            d = 360.0 - d
        return d <= hue_tol

    @numba.njit(cache=True, nogil=True)
    def first_feasible_nb(hs, ss, vs, lin, bg_lum, required, h0, level0, chromatic, hue_tol, neutral_max):
        for i in range(hs.shape[0]):
            if _feasible_nb(hs[i], ss[i], vs[i], lin, bg_lum, required, h0, level0, chromatic, hue_tol, neutral_max):
                return i
        return -1
else:  # pragma: no cover
    first_feasible_nb = None


def hsv_to_rgb_np(hs: np.ndarray, ss: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Vectorized twin of ``colors.hsv_to_rgb``; returns an (n, 3) int array."""
    hh = np.mod(hs, 360.0) / 60.0
    i = np.floor(hh)
    f = hh - i
    i = i.astype(np.int64) % 6
    p = vs * (1.0 - ss)
    q = vs * (1.0 - ss * f)
    t = vs * (1.0 - ss * (1.0 - f))
    r = np.choose(i, [vs, q, p, p, t, vs])
    g = np.choose(i, [t, vs, vs, q, p, p])
    b = np.choose(i, [p, p, t, vs, vs, q])
    rgb = np.stack([r, g, b], axis=1)
    gray = ss == 0.0
    rgb[gray] = vs[gray, None]
    return np.floor(rgb * 255.0 + 0.5).astype(np.int64)


def rgb_to_hs_np(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = rgb.astype(np.float64) / 255.0
    r, g, b = x[:, 0], x[:, 1], x[:, 2]
    mx = np.maximum(np.maximum(r, g), b)
    mn = np.minimum(np.minimum(r, g), b)
    span = mx - mn
    safe = np.where(span == 0.0, 1.0, span)
    h = np.where(
        span == 0.0,
        0.0,
        np.where(
            mx == r,
            60.0 * (g - b) / safe,
            np.where(mx == g, 60.0 * (b - r) / safe + 120.0, 60.0 * (r - g) / safe + 240.0),
        ),
    )
    h = np.where(h < 0.0, h + 360.0, h)
    h = np.where(h >= 360.0, h - 360.0, h)
    s = np.where(mx == 0.0, 0.0, span / np.where(mx == 0.0, 1.0, mx))
    return h, s


def first_feasible_np(hs, ss, vs, lin, bg_lum, required, h0, level0, chromatic, hue_tol, neutral_max):
    if hs.shape[0] == 0:
        return -1
    rgb = hsv_to_rgb_np(hs, ss, vs)
    lum = 0.2126 * lin[rgb[:, 0]] + 0.7152 * lin[rgb[:, 1]] + 0.0722 * lin[rgb[:, 2]]
    hi = np.maximum(lum, bg_lum)
    lo = np.minimum(lum, bg_lum)
    ok = (hi + 0.05) / (lo + 0.05) >= required
    if chromatic:
        hh, s2 = rgb_to_hs_np(rgb)
        level = np.where(s2 <= 0.33, 0, np.where(s2 <= 0.67, 1, 2))
        d = np.abs(hh - h0) % 360.0
        d = np.where(d > 180.0, 360.0 - d, d)
        ok &= (s2 > neutral_max) & (level == level0) & (d <= hue_tol)
    hit = np.flatnonzero(ok)
    return int(hit[0]) if hit.size else -1


# ---------------------------------------------------------------------------
# raster recoloring with closeness-weighted blending


def recolor_np(pixels: np.ndarray, src: np.ndarray, dst: np.ndarray, tol: int) -> tuple[np.ndarray, int]:
    rgb = pixels[..., :3].astype(np.int64)
    d = np.abs(rgb - src.astype(np.int64)).max(axis=-1)
    hit = d <= tol
    t = 1.0 - d / (tol + 1.0)
    blended = np.floor(rgb + t[..., None] * (dst.astype(np.int64) - rgb) + 0.5)
    out = pixels.copy()
    out[..., :3] = np.where(hit[..., None], blended, rgb).astype(pixels.dtype)
    return out, int(hit.sum())


def _recolor_loop(pixels, src, dst, tol):
    out = pixels.copy()
    hits = 0
    h, w = pixels.shape[0], pixels.shape[1]
    for y in range(h):
        for x in range(w):
            d = 0
            for c in range(3):
                dc = abs(int(pixels[y, x, c]) - int(src[c]))
                if dc > d:
                    d = dc
            if d <= tol:
                hits += 1
                t = 1.0 - d / (tol + 1.0)
                for c in range(3):
                    p = int(pixels[y, x, c])
                    out[y, x, c] = math.floor(p + t * (int(dst[c]) - p) + 0.5)
    return out, hits


recolor_nb = _njit(_recolor_loop)


def count_near_np(pixels: np.ndarray, color: np.ndarray, tol: int) -> int:
    rgb = pixels[..., :3].astype(np.int64)
    d = np.abs(rgb - color.astype(np.int64)).max(axis=-1)
    mask = d <= tol
    if pixels.shape[-1] == 4:
        mask &= pixels[..., 3] > 0
    return int(mask.sum())


# ---------------------------------------------------------------------------
# dispatch


def template_errors(weights: np.ndarray, dist: np.ndarray) -> np.ndarray:
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    if USE_NUMBA:
        return template_errors_nb(weights, dist)
    return template_errors_np(weights, dist)


def first_feasible(hs, ss, vs, bg_lum: float, required: float, h0: float, level0: int, chromatic: bool,
                   hue_tol: float, neutral_max: float = NEUTRAL_MAX_SATURATION) -> int:
    args = (
        np.ascontiguousarray(hs, dtype=np.float64),
        np.ascontiguousarray(ss, dtype=np.float64),
        np.ascontiguousarray(vs, dtype=np.float64),
        LIN,
        float(bg_lum),
        float(required),
        float(h0),
        int(level0),
        bool(chromatic),
        float(hue_tol),
        float(neutral_max),
    )
    if USE_NUMBA:
        return int(first_feasible_nb(*args))
    return first_feasible_np(*args)


def recolor(pixels: np.ndarray, src, dst, tol: int) -> tuple[np.ndarray, int]:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    pixels = np.ascontiguousarray(pixels)
    if USE_NUMBA:
        out, hits = recolor_nb(pixels, src, dst, tol)
        return out, int(hits)
    return recolor_np(pixels, src, dst, tol)
