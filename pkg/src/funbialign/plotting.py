"""Minimal SVG rendering of curves and discovered motifs.

Output bytes depend only on the inputs: no timestamps, ids or fonts are
embedded beyond plain ``<text>`` labels.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .curves import CurveSet
from .io import atomic_write_text

PALETTE = (
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
    "#66a61e", "#e6ab02", "#a6761d", "#1f78b4",
)
WIDTH, PANEL_HEIGHT, MARGIN = 900, 220, 30


def _points(xs, ys) -> str:
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))


class _Frame:
    def __init__(self, x_range, y_range, top: float, height: float = PANEL_HEIGHT):
        self.x0, self.x1 = x_range
        y0, y1 = y_range
        if y1 == y0:
            y0, y1 = y0 - 1.0, y1 + 1.0
        self.y0, self.y1 = y0, y1
        self.top, self.height = top, height

    def x(self, v):
        span = (self.x1 - self.x0) or 1.0
        return MARGIN + (np.asarray(v, dtype=float) - self.x0) / span * (WIDTH - 2 * MARGIN)

    def y(self, v):
        frac = (np.asarray(v, dtype=float) - self.y0) / (self.y1 - self.y0)
        return self.top + self.height - MARGIN - frac * (self.height - 2 * MARGIN)

    def axes(self) -> str:
        bottom = self.top + self.height - MARGIN
        return (
            f'<line x1="{MARGIN}" y1="{bottom:.2f}" x2="{WIDTH - MARGIN}" y2="{bottom:.2f}" stroke="#999"/>'
            f'<line x1="{MARGIN}" y1="{self.top + MARGIN:.2f}" x2="{MARGIN}" y2="{bottom:.2f}" stroke="#999"/>'
        )


def _document(height: float, body: Sequence[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.0f}" '
        f'viewBox="0 0 {WIDTH} {height:.0f}">'
    )
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def motif_svg(motif: dict, curves: CurveSet) -> str:
    """Overlay of one motif's portions on a shared, aligned axis."""
    color = PALETTE[(motif.get("final_rank", 1) - 1) % len(PALETTE)]
    series = []
    for p in motif["portions"]:
        c = curves[curves.index_of(p["curve_id"])]
        series.append(c.values[p["start"]:p["start"] + p["length"]])
    length = max((s.size for s in series), default=1)
    lo = min((float(s.min()) for s in series), default=0.0)
    hi = max((float(s.max()) for s in series), default=1.0)
    frame = _Frame((0, max(length - 1, 1)), (lo, hi), 0.0)
    body = [frame.axes()]
    title = (
        f'motif rank {motif.get("final_rank", "?")}: n={len(series)}, '
        f'Hadj={motif.get("h_adjusted", float("nan")):.4g}'
    )
    body.append(f'<text x="{MARGIN}" y="18" font-size="13">{title}</text>')
    for s in series:
        xs = frame.x(np.arange(s.size))
        body.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{_points(xs, frame.y(s))}"/>'
        )
    return _document(PANEL_HEIGHT, body)


def curves_svg(curves: CurveSet, motifs: Sequence[dict] = ()) -> str:
    """Every curve in its own panel, with motif portions drawn in colour."""
    body = []
    for k, c in enumerate(curves.curves):
        frame = _Frame((0, len(c) - 1), (float(c.values.min()), float(c.values.max())), k * PANEL_HEIGHT)
        body.append(frame.axes())
        body.append(f'<text x="{MARGIN}" y="{k * PANEL_HEIGHT + 18}" font-size="13">{c.id}</text>')
        xs = frame.x(np.arange(len(c)))
        body.append(
            f'<path fill="none" stroke="#777" stroke-width="0.8" d="M{_points(xs, frame.y(c.values)).replace(" ", " L")}"/>'
        )
        for m, motif in enumerate(motifs):
            color = PALETTE[m % len(PALETTE)]
            for p in motif["portions"]:
                if p["curve_id"] != c.id:
                    continue
                idx = np.arange(p["start"], p["start"] + p["length"])
                body.append(
                    f'<path fill="none" stroke="{color}" stroke-width="1.6" '
                    f'd="M{_points(frame.x(idx), frame.y(c.values[idx])).replace(" ", " L")}"/>'
                )
    return _document(max(len(curves), 1) * PANEL_HEIGHT, body)


def plot(motifs: Sequence[dict], curves: CurveSet, out_dir) -> list[Path]:
    """Write ``curves.svg`` and one ``motif_<rank>.svg`` per motif."""
    out_dir = Path(out_dir)
    written = []
    path = out_dir / "curves.svg"
    atomic_write_text(path, curves_svg(curves, motifs))
    written.append(path)
    for k, motif in enumerate(motifs):
        path = out_dir / f"motif_{motif.get('final_rank', k + 1):03d}.svg"
        atomic_write_text(path, motif_svg(motif, curves))
        written.append(path)
    return written
