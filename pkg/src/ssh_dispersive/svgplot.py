"""Dependency-free SVG emission: log-log line plots and magnitude heatmaps."""
from __future__ import annotations

import math

import numpy as np

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50
_COLORS = ["#1f6fb2", "#d1495b", "#3c8d53", "#8a5fb0", "#c87d2f", "#555555"]


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class _Canvas:
    def __init__(self, width=_W, height=_H):
        self.width, self.height = width, height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>']

    def line(self, x1, y1, x2, y2, color="#888", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{color}" stroke-width="{width}"{d}/>')

    def path(self, pts, color, width=1.5, dash=None):
        if len(pts) < 2:
            return
        d = "M" + " L".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        dd = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<path d="{d}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{dd}/>')

    def text(self, x, y, s, size=12, anchor="middle", color="#222", rotate=None):
        t = f' transform="rotate({rotate} {x:.1f} {y:.1f})"' if rotate else ""
        self.parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" '
            f'font-family="monospace" text-anchor="{anchor}" '
            f'fill="{color}"{t}>{_esc(s)}</text>')

    def rect(self, x, y, w, h, fill):
        self.parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" '
                          f'height="{h:.2f}" fill="{fill}"/>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"])


def _log_ticks(lo: float, hi: float):
    out = []
    e = math.floor(math.log10(lo))
    while 10.0 ** e <= hi * 1.0001:
        if 10.0 ** e >= lo * 0.9999:
            out.append(10.0 ** e)
        e += 1
    return out


def loglog_plot(curves, xlabel: str, ylabel: str, title: str = "") -> str:
    """curves: list of (label, x array, y array, dashed flag)."""
    xs = np.concatenate([np.asarray(c[1], float) for c in curves])
    ys = np.concatenate([np.asarray(c[2], float) for c in curves])
    ys = ys[ys > 0]
    x0, x1 = xs.min(), xs.max()
    y0, y1 = ys.min() * 0.8, ys.max() * 1.25

    def px(x):
        return _ML + (math.log10(x) - math.log10(x0)) / \
            (math.log10(x1) - math.log10(x0)) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (math.log10(y) - math.log10(y0)) / \
            (math.log10(y1) - math.log10(y0)) * (_H - _MT - _MB)

    c = _Canvas()
    for tick in _log_ticks(x0, x1):
        c.line(px(tick), _MT, px(tick), _H - _MB, "#e0e0e0")
        c.text(px(tick), _H - _MB + 18, f"1e{int(math.log10(tick))}")
    for tick in _log_ticks(y0, y1):
        c.line(_ML, py(tick), _W - _MR, py(tick), "#e0e0e0")
        c.text(_ML - 8, py(tick) + 4, f"1e{int(math.log10(tick))}", anchor="end")
    c.line(_ML, _H - _MB, _W - _MR, _H - _MB, "#222")
    c.line(_ML, _MT, _ML, _H - _MB, "#222")
    c.text((_ML + _W - _MR) / 2, _H - 12, xlabel)
    c.text(16, (_MT + _H - _MB) / 2, ylabel, rotate=-90)
    if title:
        c.text((_ML + _W - _MR) / 2, _MT - 4, title, size=13)
    for i, (label, x, y, dashed) in enumerate(curves):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        keep = y > 0
        pts = [(px(a), py(b)) for a, b in zip(x[keep], y[keep])]
        color = _COLORS[i % len(_COLORS)]
        c.path(pts, color, dash="6,4" if dashed else None)
        c.text(_W - _MR - 6, _MT + 16 + 16 * i, label, anchor="end", color=color)
    return c.render()


def _heat_color(v: float) -> str:
    """0 -> white, 1 -> dark blue through teal."""
    v = min(max(v, 0.0), 1.0)
    r = int(255 * (1.0 - v) ** 1.5)
    g = int(255 * (1.0 - 0.75 * v))
    b = int(255 * (1.0 - 0.35 * v))
    return f"rgb({r},{g},{b})"


def heatmap(values, times, cells, xlabel="t", ylabel="cell n",
            title="", log_scale=True) -> str:
    """values: (T, N) nonnegative magnitudes; one rect per entry."""
    values = np.asarray(values, float)
    c = _Canvas()
    vmax = values.max() or 1.0
    if log_scale:
        floor = vmax * 1e-6
        scaled = np.log(np.maximum(values, floor) / floor) / math.log(vmax / floor)
    else:
        scaled = values / vmax
    T, N = values.shape
    w = (_W - _ML - _MR) / T
    h = (_H - _MT - _MB) / N
    for i in range(T):
        for j in range(N):
            v = scaled[i, j]
            if v <= 0:
                continue
            c.rect(_ML + i * w, _H - _MB - (j + 1) * h, w + 0.5, h + 0.5,
                   _heat_color(float(v)))
    c.line(_ML, _H - _MB, _W - _MR, _H - _MB, "#222")
    c.line(_ML, _MT, _ML, _H - _MB, "#222")
    for frac in (0.0, 0.5, 1.0):
        i = int(frac * (T - 1))
        j = int(frac * (N - 1))
        c.text(_ML + (i + 0.5) * w, _H - _MB + 18, f"{float(times[i]):g}")
        c.text(_ML - 8, _H - _MB - (j + 0.5) * h + 4, str(int(cells[j])),
               anchor="end")
    c.text((_ML + _W - _MR) / 2, _H - 12, xlabel)
    c.text(16, (_MT + _H - _MB) / 2, ylabel, rotate=-90)
    if title:
        c.text((_ML + _W - _MR) / 2, _MT - 4, title, size=13)
    return c.render()
