"""Serializers for population series: CSV, JSON and a small SVG line chart."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .core import PopulationSeries

CSV_HEADER = ("t", "p_upper", "p_middle", "p_lower")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def clamped(series: PopulationSeries) -> PopulationSeries:
    """Probabilities clipped into [0, 1]; applied only when emitting."""
    return PopulationSeries(
        np.asarray(series.times, dtype=float),
        *(np.clip(np.asarray(p, dtype=float), 0.0, 1.0) for p in (series.p_upper, series.p_middle, series.p_lower)),
    )


def to_csv(series: PopulationSeries) -> str:
    s = clamped(series)
    lines = [",".join(CSV_HEADER)]
    for row in zip(s.times, s.p_upper, s.p_middle, s.p_lower):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def from_csv(text: str) -> PopulationSeries:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = np.array([[float(v) for v in row] for row in reader if row], dtype=float).reshape(-1, 4)
    return PopulationSeries(rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3])


def to_json(series: PopulationSeries, params: dict) -> str:
    s = clamped(series)
    doc = {
        "params": params,
        "t": [float(v) for v in s.times],
        "p_upper": [float(v) for v in s.p_upper],
        "p_middle": [float(v) for v in s.p_middle],
        "p_lower": [float(v) for v in s.p_lower],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def from_json(text: str) -> tuple[PopulationSeries, dict]:
    doc = json.loads(text)
    series = PopulationSeries(*(np.array(doc[k], dtype=float) for k in ("t", "p_upper", "p_middle", "p_lower")))
    return series, doc["params"]


# --- SVG ---------------------------------------------------------------

_STYLES = (
    ("p_upper", "|C+|² upper", ""),
    ("p_middle", "|C0|² middle", ' stroke-dasharray="8,5"'),
    ("p_lower", "|C-|² lower", ' stroke-dasharray="2,3"'),
)


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** np.floor(np.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = np.ceil(lo / step) * step
    ticks = []
    k = 0
    while first + k * step <= hi + 1e-9 * span:
        ticks.append(float(first + k * step))
        k += 1
    return ticks


def to_svg(series: PopulationSeries, title: str = "", width: int = 800, height: int = 480) -> str:
    """Static line chart: upper solid, middle dashed, lower dotted."""
    s = clamped(series)
    left, right, top, bottom = 70, 170, 40, 55
    pw, ph = width - left - right, height - top - bottom
    t0, t1 = float(s.times[0]), float(s.times[-1])
    tspan = (t1 - t0) or 1.0

    def x(t):
        return left + (t - t0) / tspan * pw

    def y(p):
        return top + (1.0 - p) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{left + pw / 2:.2f}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{_escape(title)}</text>')
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        yy = y(p)
        out.append(f'<line x1="{left - 5}" y1="{yy:.2f}" x2="{left}" y2="{yy:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{yy + 4:.2f}" text-anchor="end" font-family="sans-serif" font-size="12">{p:g}</text>')
    for t in _nice_ticks(t0, t1):
        xx = x(t)
        out.append(f'<line x1="{xx:.2f}" y1="{top + ph}" x2="{xx:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{xx:.2f}" y="{top + ph + 20}" text-anchor="middle" font-family="sans-serif" font-size="12">{t:g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 12}" text-anchor="middle" font-family="sans-serif" font-size="13">t</text>')
    out.append(
        f'<text x="18" y="{top + ph / 2:.2f}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {top + ph / 2:.2f})">population</text>'
    )
    for i, (attr, label, dash) in enumerate(_STYLES):
        pts = " ".join(f"{x(t):.2f},{y(p):.2f}" for t, p in zip(s.times, getattr(s, attr)))
        out.append(f'<polyline fill="none" stroke="black" stroke-width="1.3"{dash} points="{pts}"/>')
        ly = top + 20 + 22 * i
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 40}" y2="{ly}" stroke="black" stroke-width="1.3"{dash}/>')
        out.append(f'<text x="{lx + 48}" y="{ly + 4}" font-family="sans-serif" font-size="12">{_escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
