"""CIELAB / LCh to sRGB conversion (D65, 2-degree observer).

Standard matrices and constants from the sRGB specification; used to turn
(lightness, chroma, hue) cell encodings into display colors.
"""

from __future__ import annotations

import math

# D65 reference white.
_XN, _YN, _ZN = 0.95047, 1.00000, 1.08883

# CIE constants (exact rational forms).
_EPS = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0

# XYZ -> linear sRGB.
_M = (
    (3.2404542, -1.5371385, -0.4985314),
    (-0.9692660, 1.8760108, 0.0415560),
    (0.0556434, -0.2040259, 1.0572252),
)


def lch_to_lab(lightness: float, chroma: float, hue_deg: float) -> tuple[float, float, float]:
    h = math.radians(hue_deg)
    return lightness, chroma * math.cos(h), chroma * math.sin(h)


def lab_to_xyz(lightness: float, a: float, b: float) -> tuple[float, float, float]:
    fy = (lightness + 16.0) / 116.0
    fx = fy + a / 500.0
    fz = fy - b / 200.0
    xr = fx ** 3 if fx ** 3 > _EPS else (116.0 * fx - 16.0) / _KAPPA
    yr = fy ** 3 if lightness > _KAPPA * _EPS else lightness / _KAPPA
    zr = fz ** 3 if fz ** 3 > _EPS else (116.0 * fz - 16.0) / _KAPPA
    return xr * _XN, yr * _YN, zr * _ZN


def lab_to_linear_rgb(lightness: float, a: float, b: float) -> tuple[float, float, float]:
    """Unclipped linear-light sRGB; values outside [0, 1] are out of gamut."""
    x, y, z = lab_to_xyz(lightness, a, b)
    return tuple(m[0] * x + m[1] * y + m[2] * z for m in _M)  # type: ignore[return-value]


def _gamma(v: float) -> float:
    if v <= 0.0031308:
        return 12.92 * v
    return 1.055 * v ** (1.0 / 2.4) - 0.055


def lab_to_srgb8(lightness: float, a: float, b: float) -> tuple[int, int, int]:
    """Lab to 8-bit sRGB, gamut-clipped per channel."""
    lin = lab_to_linear_rgb(lightness, a, b)
    out = []
    for v in lin:
        v = min(1.0, max(0.0, v))
        out.append(int(round(255.0 * _gamma(v))))
    return out[0], out[1], out[2]


def lch_to_srgb8(lightness: float, chroma: float, hue_deg: float) -> tuple[int, int, int]:
    return lab_to_srgb8(*lch_to_lab(lightness, chroma, hue_deg))


def in_srgb_gamut(lightness: float, chroma: float, hue_deg: float, tol: float = 1e-9) -> bool:
    """True when the LCh color converts to linear sRGB without clipping."""
    lin = lab_to_linear_rgb(*lch_to_lab(lightness, chroma, hue_deg))
    return all(-tol <= v <= 1.0 + tol for v in lin)
