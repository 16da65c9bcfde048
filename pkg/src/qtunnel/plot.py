"""Minimal standalone SVG line plots for the three canned kinds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .io import ReportFormatError, read_csv_table

KINDS = ("transfer-vs-t", "tc-vs-Q", "gap-vs-Q")
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


@dataclass(frozen=True)
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class PlotSpec:
    title: str
    xlabel: str
    ylabel: str
    series: tuple[Series, ...]
    logx: bool = False
    logy: bool = False
    width: int = 640
    height: int = 420


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def render_svg(spec: PlotSpec) -> str:
    left, right, top, bottom = 70, 20, 40, 50
    w, h = spec.width - left - right, spec.height - top - bottom

    def tx(arr, log):
        arr = np.asarray(arr, float)
        return np.log10(arr) if log else arr

    xs = [tx(s.x, spec.logx) for s in spec.series]
    ys = [tx(s.y, spec.logy) for s in spec.series]
    allx = np.concatenate(xs)
    ally = np.concatenate(ys)
    if not np.all(np.isfinite(allx)) or not np.all(np.isfinite(ally)):
        raise ReportFormatError("non-finite or non-positive values on a log axis")
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(v):
        return left + (v - x0) / (x1 - x0) * w

    def py(v):
        return top + h - (v - y0) / (y1 - y0) * h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>',
        f'<text x="{spec.width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(spec.title)}</text>',
        f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>',
    ]
    for k in range(5):
        fx = x0 + (x1 - x0) * k / 4
        fy = y0 + (y1 - y0) * k / 4
        lx = 10 ** fx if spec.logx else fx
        ly = 10 ** fy if spec.logy else fy
        out.append(f'<text x="{px(fx):.1f}" y="{top + h + 18}" text-anchor="middle" font-size="11">{_fmt(lx)}</text>')
        out.append(f'<text x="{left - 6}" y="{py(fy) + 4:.1f}" text-anchor="end" font-size="11">{_fmt(ly)}</text>')
    out.append(f'<text x="{left + w / 2:.1f}" y="{spec.height - 10}" text-anchor="middle" font-size="13">'
               f'{escape(spec.xlabel)}{" (log)" if spec.logx else ""}</text>')
    out.append(f'<text x="16" y="{top + h / 2:.1f}" text-anchor="middle" font-size="13" '
               f'transform="rotate(-90 16 {top + h / 2:.1f})">{escape(spec.ylabel)}{" (log)" if spec.logy else ""}</text>')
    for i, (s, sx, sy) in enumerate(zip(spec.series, xs, ys)):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(sx, sy))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        if len(sx) <= 50:
            for a, b in zip(sx, sy):
                out.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3" fill="{color}"/>')
        if len(spec.series) > 1:
            out.append(f'<text x="{left + w - 6}" y="{top + 16 + 14 * i}" text-anchor="end" '
                       f'font-size="11" fill="{color}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_spec_from_csv(path: str | Path, kind: str) -> PlotSpec:
    if kind not in KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; choose from {', '.join(KINDS)}")
    header, data = read_csv_table(path)
    col = {name: i for i, name in enumerate(header)}

    def need(*names):
        missing = [n for n in names if n not in col]
        if missing:
            raise ReportFormatError(f"{path}: missing column(s) {', '.join(missing)} for {kind}")

    if kind == "transfer-vs-t":
        need("t")
        probs = [h for h in header if h.startswith("prob_v")]
        if not probs:
            raise ReportFormatError(f"{path}: no prob_v columns")
        series = tuple(Series(h, data[:, 0], data[:, col[h]]) for h in probs)
        return PlotSpec("transfer probability vs time", "t", "probability", series)
    need("Q")
    q = data[:, col["Q"]]
    if kind == "tc-vs-Q":
        need("sup_prob")
        logx = bool(np.all(q > 0))
        return PlotSpec("windowed sup transfer vs depth", "Q", "sup_prob",
                        (Series("sup_prob", q, data[:, col["sup_prob"]]),), logx=logx)
    need("gap")
    gap = data[:, col["gap"]]
    keep = (q > 0) & (gap > 0) & np.isfinite(gap)
    if not keep.any():
        raise ReportFormatError(f"{path}: no positive (Q, gap) rows for a log-log plot")
    return PlotSpec("well gap vs depth", "Q", "gap", (Series("gap", q[keep], gap[keep]),),
                    logx=True, logy=True)


def plot_csv(path: str | Path, kind: str, out: str | Path) -> None:
    Path(out).write_text(render_svg(plot_spec_from_csv(path, kind)))


def loglog_slope_of(spec: PlotSpec) -> float:
    s = spec.series[0]
    slope, _ = np.polyfit(np.log(s.x), np.log(s.y), 1)
    return float(slope) if math.isfinite(slope) else math.nan
