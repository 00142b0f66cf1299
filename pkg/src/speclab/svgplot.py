"""Minimal SVG scatter plots, written directly (no plotting dependency).

Enough for the artifacts this package emits: log-log scatter with an
optional fitted power line, and convergence ladders. Output is a plain
SVG string; callers write it to plots/*.svg.
"""

from __future__ import annotations

import math
from typing import Sequence

WIDTH, HEIGHT = 520, 390
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 62, 16, 34, 46


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        d0 = math.floor(math.log10(lo))
        d1 = math.ceil(math.log10(hi))
        ticks = [10.0**d for d in range(d0, d1 + 1)]
        if len(ticks) <= 2:
            ticks = sorted(
                {10.0**d * m for d in range(d0 - 1, d1 + 1) for m in (1, 2, 5)}
            )
        return [t for t in ticks if lo * 0.999 <= t <= hi * 1.001]
    span = hi - lo
    if span <= 0:
        return [lo]
    step = 10.0 ** math.floor(math.log10(span / 4.0))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= 5.5:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * span:
        out.append(t)
        t += step
    return out


class _Axes:
    def __init__(self, xs, ys, logx, logy):
        self.logx, self.logy = logx, logy
        fx = math.log10 if logx else float
        fy = math.log10 if logy else float
        self.fx, self.fy = fx, fy
        tx = [fx(x) for x in xs]
        ty = [fy(y) for y in ys]
        padx = 0.06 * (max(tx) - min(tx) or 1.0)
        pady = 0.08 * (max(ty) - min(ty) or 1.0)
        self.x0, self.x1 = min(tx) - padx, max(tx) + padx
        self.y0, self.y1 = min(ty) - pady, max(ty) + pady

    def px(self, x: float) -> float:
        t = (self.fx(x) - self.x0) / (self.x1 - self.x0)
        return MARGIN_L + t * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y: float) -> float:
        t = (self.fy(y) - self.y0) / (self.y1 - self.y0)
        return HEIGHT - MARGIN_B - t * (HEIGHT - MARGIN_T - MARGIN_B)

    def tick_values(self, axis: str) -> list[float]:
        if axis == "x":
            lo, hi, log = self.x0, self.x1, self.logx
        else:
            lo, hi, log = self.y0, self.y1, self.logy
        if log:
            return _ticks(10.0**lo, 10.0**hi, True)
        return _ticks(lo, hi, False)


def render_scatter(
    samples: Sequence[tuple[float, float]],
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = True,
    logy: bool = True,
    power_line: tuple[float, float] | None = None,
    unit_diagonal: bool = False,
) -> str:
    """Scatter plot; power_line=(slope, intercept) draws y=e^b x^a on log
    axes (or a straight line on linear axes)."""
    pts = [(x, y) for x, y in samples if _plottable(x, logx) and _plottable(y, logy)]
    if not pts:
        pts = [(1.0, 1.0)]
    ax = _Axes([p[0] for p in pts], [p[1] for p in pts], logx, logy)
    el: list[str] = []
    el.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" '
        f'width="{WIDTH - MARGIN_L - MARGIN_R}" '
        f'height="{HEIGHT - MARGIN_T - MARGIN_B}" '
        'fill="none" stroke="#444" stroke-width="1"/>'
    )
    for tv in ax.tick_values("x"):
        x = ax.px(tv)
        el.append(
            f'<line x1="{x:.1f}" y1="{HEIGHT - MARGIN_B}" x2="{x:.1f}" '
            f'y2="{HEIGHT - MARGIN_B + 4}" stroke="#444"/>'
        )
        el.append(
            f'<text x="{x:.1f}" y="{HEIGHT - MARGIN_B + 16}" '
            f'font-size="10" text-anchor="middle">{_fmt(tv)}</text>'
        )
    for tv in ax.tick_values("y"):
        y = ax.py(tv)
        el.append(
            f'<line x1="{MARGIN_L - 4}" y1="{y:.1f}" x2="{MARGIN_L}" '
            f'y2="{y:.1f}" stroke="#444"/>'
        )
        el.append(
            f'<text x="{MARGIN_L - 7}" y="{y + 3:.1f}" font-size="10" '
            f'text-anchor="end">{_fmt(tv)}</text>'
        )
    if power_line is not None:
        el.append(_power_path(ax, pts, power_line))
    if unit_diagonal:
        lo = max(min(p[0] for p in pts), min(p[1] for p in pts))
        hi = min(max(p[0] for p in pts), max(p[1] for p in pts))
        if lo < hi:
            el.append(
                f'<line x1="{ax.px(lo):.1f}" y1="{ax.py(lo):.1f}" '
                f'x2="{ax.px(hi):.1f}" y2="{ax.py(hi):.1f}" '
                'stroke="#999" stroke-dasharray="4 3"/>'
            )
    for x, y in pts:
        el.append(
            f'<circle cx="{ax.px(x):.1f}" cy="{ax.py(y):.1f}" r="3.2" '
            'fill="#1f77b4" fill-opacity="0.85"/>'
        )
    el.append(
        f'<text x="{WIDTH / 2:.0f}" y="{MARGIN_T - 12}" font-size="13" '
        f'text-anchor="middle">{_esc(title)}</text>'
    )
    el.append(
        f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2:.0f}" '
        f'y="{HEIGHT - 10}" font-size="11" text-anchor="middle">'
        f"{_esc(xlabel)}</text>"
    )
    el.append(
        f'<text x="14" y="{(MARGIN_T + HEIGHT - MARGIN_B) / 2:.0f}" '
        f'font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 14 {(MARGIN_T + HEIGHT - MARGIN_B) / 2:.0f})">'
        f"{_esc(ylabel)}</text>"
    )
    body = "\n".join(el)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" font-family="sans-serif">\n{body}\n</svg>\n'
    )


def _plottable(v: float, log: bool) -> bool:
    if not math.isfinite(v):
        return False
    return v > 0 if log else True


def _power_path(ax: _Axes, pts, power_line) -> str:
    slope, intercept = power_line
    xs = sorted(p[0] for p in pts)
    lo, hi = xs[0], xs[-1]
    steps = 40
    coords = []
    for i in range(steps + 1):
        if ax.logx:
            x = lo * (hi / lo) ** (i / steps)
            y = math.exp(intercept) * x**slope
        else:
            x = lo + (hi - lo) * i / steps
            y = intercept + slope * x
        if _plottable(y, ax.logy):
            coords.append(f"{ax.px(x):.1f},{ax.py(y):.1f}")
    return (
        f'<polyline points="{" ".join(coords)}" fill="none" '
        'stroke="#d62728" stroke-width="1.6"/>'
    )


def _esc(s: str) -> str:
    return (
        s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
