"""Deterministic SVG scatter plots of 2-D embeddings colored by category."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .embedding import Embedding2D
from .errors import FormatError

# 12 visually distinct fills, assigned to labels in sorted order.
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
)

MARGIN_FRACTION = 0.05


@dataclass(frozen=True)
class PlotSpec:
    color_by: str = "label"
    width: int = 800
    height: int = 600
    point_radius: float = 3.0
    legend: bool = True


def palette_for(labels) -> dict[str, str]:
    """Stable label -> color map: sorted label order into the fixed palette."""
    unique = sorted(set(labels))
    return {lab: PALETTE[i % len(PALETTE)] for i, lab in enumerate(unique)}


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _map_axis(values: np.ndarray, size: int, invert: bool) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    margin = MARGIN_FRACTION * size
    span = hi - lo
    if span == 0:
        return np.full(values.shape, size / 2.0)
    unit = (values - lo) / span
    if invert:
        unit = 1.0 - unit
    return margin + unit * (size - 2.0 * margin)


def render_scatter_svg(embedding: Embedding2D, labels, spec: PlotSpec = PlotSpec()) -> str:
    """Standalone SVG: one circle per sample, optional legend of rect swatches.

    Output is byte-deterministic for fixed inputs: fixed float formatting,
    sorted legend, no timestamps.
    """
    if embedding.m < 2:
        raise FormatError("scatter plot needs at least 2 embedding dimensions")
    labels = list(labels)
    if len(labels) != embedding.n:
        raise FormatError(f"{len(labels)} labels for {embedding.n} points")
    colors = palette_for(labels)
    xs = _map_axis(embedding.coords[:, 0], spec.width, invert=False)
    ys = _map_axis(embedding.coords[:, 1], spec.height, invert=True)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect width="{spec.width}" height="{spec.height}" fill="#ffffff"/>',
    ]
    for x, y, lab in zip(xs, ys, labels):
        lines.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(spec.point_radius)}" '
            f'fill="{colors[lab]}" fill-opacity="0.8"/>'
        )
    if spec.legend:
        lines.append('<g font-family="sans-serif" font-size="12">')
        for i, (lab, color) in enumerate(sorted(colors.items())):
            y = 16 + 18 * i
            lines.append(f'<rect x="10" y="{y}" width="12" height="12" fill="{color}"/>')
            lines.append(f'<text x="26" y="{y + 10}">{escape(lab)}</text>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
