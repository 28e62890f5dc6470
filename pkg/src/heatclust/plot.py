"""Static SVG figures: variance curve, eigenmap image, clusters.

Output is plain SVG text built by hand so that identical inputs give
identical bytes.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

WIDTH, HEIGHT, MARGIN = 640, 480, 56
PALETTE = ["#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def label_color(label: int) -> str:
    i = int(label) - 1
    if i < len(PALETTE):
        return PALETTE[i]
    # golden-angle hues beyond the palette
    hue = (i * 137.508) % 360
    return f"hsl({hue:.1f},65%,45%)"


def _num(x: float) -> str:
    return f"{x:.3f}"


def _scaler(lo, hi, a, b):
    span = hi - lo if hi > lo else 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def _frame(title, xlabel, ylabel):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{title}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {HEIGHT / 2})">{ylabel}</text>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#444"/>',
    ]


def _ticks(lo, hi, sx, sy, axis):
    out = []
    for v in np.linspace(lo, hi, 5):
        if axis == "x":
            x = sx(v)
            out.append(f'<text class="tick" x="{_num(x)}" y="{HEIGHT - MARGIN + 16}" '
                       f'text-anchor="middle" font-family="sans-serif" font-size="10">{v:.3g}</text>')
        else:
            y = sy(v)
            out.append(f'<text class="tick" x="{MARGIN - 6}" y="{_num(y + 3)}" '
                       f'text-anchor="end" font-family="sans-serif" font-size="10">{v:.3g}</text>')
    return out


def curve_svg(radii, values, r_hat=None) -> str:
    """Variance proxy against radius as one polyline; ``r_hat`` as a marker."""
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=float)
    x0, x1 = float(radii.min()), float(radii.max())
    y0, y1 = float(min(values.min(), 0.0)), float(values.max())
    sx = _scaler(x0, x1, MARGIN, WIDTH - MARGIN)
    sy = _scaler(y0, y1, HEIGHT - MARGIN, MARGIN)
    parts = _frame("Variance estimate", "r", "V(r)")
    parts += _ticks(x0, x1, sx, sy, "x") + _ticks(y0, y1, sx, sy, "y")
    pts = " ".join(f"{_num(sx(r))},{_num(sy(v))}" for r, v in zip(radii, values))
    parts.append(f'<polyline class="curve" points="{pts}" fill="none" stroke="#1f77b4" '
                 f'stroke-width="2"/>')
    if r_hat is not None:
        v_hat = float(np.interp(r_hat, radii, values))
        parts.append(f'<line class="r-hat" x1="{_num(sx(r_hat))}" y1="{MARGIN}" '
                     f'x2="{_num(sx(r_hat))}" y2="{HEIGHT - MARGIN}" stroke="#d62728" '
                     f'stroke-dasharray="4 3"/>')
        parts.append(f'<circle class="marker" cx="{_num(sx(r_hat))}" cy="{_num(sy(v_hat))}" '
                     f'r="5" fill="#d62728"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def project(points, azimuth=-60.0, elevation=30.0) -> np.ndarray:
    """Orthographic projection of ``n x 3`` points to the screen plane."""
    p = np.asarray(points, dtype=float)
    if p.shape[1] < 3:
        p = np.hstack([p, np.zeros((p.shape[0], 3 - p.shape[1]))])
    p = p[:, :3]
    az, el = math.radians(azimuth), math.radians(elevation)
    right = np.array([math.cos(az), math.sin(az), 0.0])
    forward = np.array([-math.sin(az), math.cos(az), 0.0])
    up = math.cos(el) * np.array([0.0, 0.0, 1.0]) - math.sin(el) * forward
    return np.stack([p @ right, p @ up], axis=1)


def scatter_svg(points, labels, title, xlabel="x", ylabel="y", azimuth=-60.0,
                elevation=30.0, radius=2.5) -> str:
    """Scatter plot colored by label; 3-d or wider input is projected."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.shape[1] == 1:
        xy = np.hstack([points, np.zeros_like(points)])
    elif points.shape[1] == 2:
        xy = points
    else:
        xy = project(points, azimuth, elevation)
    x0, x1 = float(xy[:, 0].min()), float(xy[:, 0].max())
    y0, y1 = float(xy[:, 1].min()), float(xy[:, 1].max())
    # equal aspect ratio
    half = max(x1 - x0, y1 - y0, 1e-12) / 2 * 1.05
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    side = min(WIDTH, HEIGHT) - 2 * MARGIN
    left = (WIDTH - side) / 2
    sx = _scaler(cx - half, cx + half, left, left + side)
    sy = _scaler(cy - half, cy + half, HEIGHT - MARGIN, HEIGHT - MARGIN - side)
    parts = _frame(title, xlabel, ylabel)
    for (x, y), lab in zip(xy, labels):
        parts.append(f'<circle cx="{_num(sx(x))}" cy="{_num(sy(y))}" r="{radius}" '
                     f'fill="{label_color(lab)}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def phi_svg(phi_points, labels, **kw) -> str:
    """Image of the eliminated eigenmap, first three coordinates."""
    p = np.asarray(phi_points, dtype=float)[:, :3]
    return scatter_svg(p, labels, "Image of the eigenmap", "phi", "", **kw)


def clusters_svg(points, labels, **kw) -> str:
    return scatter_svg(points, labels, "Clusters", **kw)


def save(path, svg: str):
    Path(path).write_text(svg, encoding="utf-8", newline="")
