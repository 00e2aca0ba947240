"""Static SVG figures: container outline with an inscribed polygon, and the lambda branches."""
from __future__ import annotations

import datetime as _dt
import math
from xml.sax.saxutils import escape

import numpy as np

PIXEL_RADIUS = 200.0
MARGIN = 20.0
OUTLINE_SAMPLES = 720


def _stamp() -> str:
    now = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return "<!-- generated %s -->" % now


def _path(points, scale, cx, cy, closed=True) -> str:
    pts = ["%.3f,%.3f" % (cx + scale * x, cy - scale * y) for x, y in points]
    return ("M" + " L".join(pts) + (" Z" if closed else "")) if pts else ""


def shape_svg(container, polygon_vertices, title: str = "") -> str:
    """Container boundary plus one inscribed polygon (vertices in container coordinates).

    The container's circumradius is drawn at :data:`PIXEL_RADIUS` pixels.
    """
    size = 2.0 * (PIXEL_RADIUS + MARGIN)
    c = size / 2.0
    scale = PIXEL_RADIUS / container.circumradius()
    outline = container.outline(OUTLINE_SAMPLES)
    poly = np.asarray(polygon_vertices, float)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        _stamp(),
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">' % (size, size, size, size),
    ]
    if title:
        lines.append("<title>%s</title>" % escape(title))
    lines.append('<rect width="100%" height="100%" fill="white"/>')
    lines.append('<path d="%s" fill="none" stroke="black" stroke-width="1.5"/>' % _path(outline, scale, c, c))
    lines.append('<path d="%s" fill="#cfe0f5" fill-opacity="0.6" stroke="#1f4e9c" stroke-width="2"/>'
                 % _path(poly, scale, c, c))
    for x, y in poly:
        lines.append('<circle cx="%.3f" cy="%.3f" r="3" fill="#1f4e9c"/>' % (c + scale * x, c - scale * y))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def disk_polygon_vertices(angles) -> np.ndarray:
    """Unit-circle vertices whose consecutive central angles are ``angles``."""
    phi = np.concatenate([[0.0], np.cumsum(np.asarray(angles, float))[:-1]])
    return np.column_stack([np.cos(phi), np.sin(phi)])


def lambda_map_svg(table) -> str:
    """One polyline per side count: relative angle on x, lambda on y."""
    table = np.asarray(table, float)
    w, h, pad = 640.0, 420.0, 50.0
    ms = np.unique(table[:, 0]).astype(int)
    rel = table[:, 1] * table[:, 0] / (2.0 * math.pi)
    lam = table[:, 2]
    lo, hi = float(lam.min()), float(lam.max())
    span = hi - lo if hi > lo else 1.0

    def px(x, y):
        return pad + x * (w - 2 * pad), h - pad - (y - lo) / span * (h - 2 * pad)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        _stamp(),
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">' % (w, h, w, h),
        '<rect width="100%" height="100%" fill="white"/>',
        '<path d="M%.1f,%.1f L%.1f,%.1f L%.1f,%.1f" fill="none" stroke="black"/>'
        % (pad, pad, pad, h - pad, w - pad, h - pad),
        '<text x="%.1f" y="%.1f" font-size="12">theta / (2 pi / m)</text>' % (w / 2 - 40, h - 15),
        '<text x="5" y="%.1f" font-size="12">%.3f</text>' % (h - pad, lo),
        '<text x="5" y="%.1f" font-size="12">%.3f</text>' % (pad, hi),
    ]
    for k, m in enumerate(ms):
        sel = table[:, 0] == m
        pts = " ".join("%.2f,%.2f" % px(x, y) for x, y in zip(rel[sel], lam[sel]))
        hue = int(360 * k / max(len(ms), 1))
        lines.append('<polyline points="%s" fill="none" stroke="hsl(%d,70%%,40%%)" stroke-width="1.5"/>' % (pts, hue))
        x, y = px(rel[sel][-1], lam[sel][-1])
        lines.append('<text x="%.1f" y="%.1f" font-size="10">m=%d</text>' % (x + 3, y, m))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
