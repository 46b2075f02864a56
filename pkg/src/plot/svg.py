import math
from dataclasses import dataclass, field
from typing import Dict, Optional
from xml.sax.saxutils import escape, quoteattr

import numpy as np
from loguru import logger

from src.errors import ValidationError

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
UNLABELED = "unlabeled"
LEGEND_WIDTH = 140


@dataclass(frozen=True)
class PlotOptions:
    width: int = 720
    height: int = 540
    margin: int = 40
    point_radius: float = 4.0
    color_map: Dict[str, str] = field(default_factory=dict)
    annotate: Optional[str] = None
    azimuth: float = 45.0
    elevation: float = 30.0
    title: Optional[str] = None
    font_size: int = 10


def orthographic(Y, azimuth, elevation):
    """Rotate 3-D points by the camera angles (degrees); return screen (u, v) and depth."""
    az, el = math.radians(azimuth), math.radians(elevation)
    x, y, z = Y[:, 0], Y[:, 1], Y[:, 2]
    x1 = x * math.cos(az) - y * math.sin(az)
    y1 = x * math.sin(az) + y * math.cos(az)
    depth = y1 * math.cos(el) - z * math.sin(el)
    v = y1 * math.sin(el) + z * math.cos(el)
    return np.column_stack([x1, v]), depth


def label_colors(labels, color_map):
    names = sorted({UNLABELED if label is None else label for label in labels})
    colors = {}
    for index, name in enumerate(names):
        if name in color_map:
            colors[name] = color_map[name]
        else:
            if color_map:
                logger.warning(f"Label '{name}' is not in the color map, using the default palette")
            colors[name] = PALETTE[index % len(PALETTE)]
    return colors


def _fmt(value):
    return f"{value:.2f}"


def _annotation(template, item_id, label, fields):
    try:
        return template.format(id=item_id, label=label or "", **fields)
    except (KeyError, IndexError) as e:
        raise ValidationError(f"Annotation template '{template}' uses an unavailable field: {e}")


def render_scatter(embedding, options=None, fields=None):
    """
    SVG 1.1 scatter plot: one circle per point colored by label, a legend
    entry per distinct label, optional per-point text annotations. 3-D
    embeddings are drawn through a fixed orthographic camera.
    """
    options = options or PlotOptions()
    fields = fields or {}
    if embedding.d == 3:
        screen, depth = orthographic(embedding.Y, options.azimuth, options.elevation)
        order = np.argsort(-depth, kind="stable")
    else:
        screen, order = embedding.Y, np.arange(embedding.k)

    plot_w = options.width - 2 * options.margin - LEGEND_WIDTH
    plot_h = options.height - 2 * options.margin
    low = screen.min(axis=0)
    span = float((screen.max(axis=0) - low).max()) or 1.0
    scale = min(plot_w, plot_h) / span
    px = options.margin + (screen[:, 0] - low[0]) * scale
    py = options.height - options.margin - (screen[:, 1] - low[1]) * scale

    colors = label_colors(embedding.labels, options.color_map)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{options.width}" '
        f'height="{options.height}" viewBox="0 0 {options.width} {options.height}">',
        f'<rect x="0" y="0" width="{options.width}" height="{options.height}" fill="#ffffff"/>',
    ]
    if options.title:
        lines.append(
            f'<text x="{options.margin}" y="{options.margin // 2}" font-family="sans-serif" '
            f'font-size="{options.font_size + 4}">{escape(options.title)}</text>'
        )

    lines.append('<g class="points">')
    for i in order:
        label = embedding.labels[i]
        color = colors[UNLABELED if label is None else label]
        lines.append(
            f'<circle cx="{_fmt(px[i])}" cy="{_fmt(py[i])}" r="{_fmt(options.point_radius)}" '
            f'fill={quoteattr(color)} fill-opacity="0.85" data-id={quoteattr(embedding.ids[i])}/>'
        )
    lines.append("</g>")

    if options.annotate:
        lines.append('<g class="annotations" font-family="sans-serif">')
        for i in order:
            text = _annotation(options.annotate, embedding.ids[i], embedding.labels[i], fields.get(embedding.ids[i], {}))
            lines.append(
                f'<text x="{_fmt(px[i] + options.point_radius + 1)}" y="{_fmt(py[i] - options.point_radius)}" '
                f'font-size="{options.font_size}">{escape(text)}</text>'
            )
        lines.append("</g>")

    lines.append('<g class="legend" font-family="sans-serif">')
    legend_x = options.width - options.margin - LEGEND_WIDTH + 20
    for row, (name, color) in enumerate(colors.items()):
        y = options.margin + row * (options.font_size + 8)
        lines.append(f'<rect class="legend-entry" x="{legend_x}" y="{y}" width="10" height="10" fill={quoteattr(color)}/>')
        lines.append(
            f'<text x="{legend_x + 16}" y="{y + 9}" font-size="{options.font_size}">{escape(name)}</text>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(document, path):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(document)
    logger.info(f"Saved plot to {path}")
