"""Minimal SVG line plots: fixed 800x600 viewport, no external assets."""
from __future__ import annotations

import math

import numpy as np

WIDTH, HEIGHT = 800, 600
PAD_L, PAD_R, PAD_T, PAD_B = 70, 20, 40, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf")


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + 1e-9 * step:
        out.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return out


def _label(v):
    return f"{v:.6g}"


def line_plot(series, title="", xlabel="", ylabel="", version="") -> str:
    """series: list of (label, x, y, style) with style 'line' or 'step'.

    Non-finite points break a polyline.  The data box gets a 5% margin.
    """
    xs = np.concatenate([np.asarray(s[1], float) for s in series] or [np.zeros(1)])
    ys = np.concatenate([np.asarray(s[2], float) for s in series] or [np.zeros(1)])
    ok = np.isfinite(xs)
    xs = xs[ok]
    ys = ys[np.isfinite(ys)]
    x0, x1 = (float(xs.min()), float(xs.max())) if len(xs) else (0.0, 1.0)
    y0, y1 = (float(ys.min()), float(ys.max())) if len(ys) else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    mx, my = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    x0, x1, y0, y1 = x0 - mx, x1 + mx, y0 - my, y1 + my
    pw, ph = WIDTH - PAD_L - PAD_R, HEIGHT - PAD_T - PAD_B

    def px(x):
        return PAD_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return PAD_T + (y1 - y) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}">',
           f"<!-- aesthetic_curves {version} -->",
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{PAD_L}" y="{PAD_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for v in _ticks(x0, x1):
        X = px(v)
        out.append(f'<line x1="{X:.2f}" y1="{PAD_T + ph}" x2="{X:.2f}" y2="{PAD_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{PAD_T + ph + 20}" font-size="12" text-anchor="middle">{_label(v)}</text>')
    for v in _ticks(y0, y1):
        Y = py(v)
        out.append(f'<line x1="{PAD_L - 5}" y1="{Y:.2f}" x2="{PAD_L}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{PAD_L - 8}" y="{Y + 4:.2f}" font-size="12" text-anchor="end">{_label(v)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{PAD_T - 15}" font-size="14" text-anchor="middle">{title}</text>')
    out.append(f'<text x="{PAD_L + pw / 2}" y="{HEIGHT - 10}" font-size="13" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="15" y="{PAD_T + ph / 2}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 15 {PAD_T + ph / 2})">{ylabel}</text>')

    for k, (label, x, y, style) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        x, y = np.asarray(x, float), np.asarray(y, float)
        if style == "step":
            # x holds M + 1 edges, y holds M heights
            xx = np.repeat(x, 2)[1:-1]
            yy = np.repeat(y, 2)
        else:
            xx, yy = x, y
        runs, cur = [], []
        for a, b in zip(xx, yy):
            if math.isfinite(a) and math.isfinite(b):
                cur.append(f"{px(a):.2f},{py(b):.2f}")
            elif cur:
                runs.append(cur)
                cur = []
        if cur:
            runs.append(cur)
        for run in runs:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{" ".join(run)}"/>')
        ly = PAD_T + 15 + 16 * k
        out.append(f'<text x="{PAD_L + pw - 10}" y="{ly}" font-size="12" fill="{color}" '
                   f'text-anchor="end">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
