"""Static SVG scenes: points, homothet outlines and graph edges."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from .geometry import AXISBOX, BALL, GeometryError, Homothet

PALETTE = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d")


def _bbox(points, homothets, edges_xy):
    chunks = [np.asarray(points, dtype=float).reshape(-1, 2)]
    for h in homothets:
        c, s = h.c[:2], h.scale
        if h.body.kind == AXISBOX:
            w = s * np.asarray(h.body.halfwidths[:2])
        elif h.body.kind == BALL:
            w = np.array([s, s])
        else:
            V = h.vertices()
            chunks.append(V)
            continue
        chunks.append(np.array([c - w, c + w]))
    chunks.extend(edges_xy)
    allp = np.vstack([c for c in chunks if len(c)]) if any(len(c) for c in chunks) else np.zeros((0, 2))
    if len(allp) == 0:
        return np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    lo, hi = allp.min(0), allp.max(0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.05 * span.max()
    return lo - pad, hi + pad


def scene_svg(points=(), homothets=(), edges=(), highlight=(), project=False) -> str:
    """SVG document for a planar scene; y grows upward as in the data."""
    P = np.asarray(points, dtype=float)
    P = P.reshape(-1, P.shape[-1] if P.ndim == 2 and P.size else 2)
    d = P.shape[1]
    if any(h.body.d != 2 for h in homothets) or d != 2:
        if not project:
            raise GeometryError("SVG scenes are planar; pass project=True to draw the first two coordinates")
    P = P[:, :2]
    seg = lambda E: [P[[u, v]] for u, v in E]
    lo, hi = _bbox(P, homothets, seg(edges) + seg(highlight))
    size = hi - lo
    unit = float(size.max()) / 400.0
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", version="1.1",
                      viewBox=f"{lo[0]:.9g} {-hi[1]:.9g} {size[0]:.9g} {size[1]:.9g}",
                      width="600", height=f"{600 * size[1] / size[0]:.6g}")
    if project and d != 2:
        root.set("data-projected", "first-two-coordinates")
    g = ET.SubElement(root, "g", transform="scale(1,-1)")
    sw = f"{unit:.6g}"
    for i, h in enumerate(homothets):
        color = PALETTE[i % len(PALETTE)]
        style = {"fill": color, "fill-opacity": "0.12", "stroke": color, "stroke-width": sw}
        c = h.c
        if h.body.kind == BALL:
            ET.SubElement(g, "circle", cx=f"{c[0]:.9g}", cy=f"{c[1]:.9g}", r=f"{h.scale:.9g}", **style)
        elif h.body.kind == AXISBOX:
            w = h.scale * np.asarray(h.body.halfwidths[:2])
            ET.SubElement(g, "rect", x=f"{c[0] - w[0]:.9g}", y=f"{c[1] - w[1]:.9g}",
                          width=f"{2 * w[0]:.9g}", height=f"{2 * w[1]:.9g}", **style)
        else:
            pts = " ".join(f"{x:.9g},{y:.9g}" for x, y in h.vertices())
            ET.SubElement(g, "polygon", points=pts, **style)
    for (u, v), cls, width in [(e, "edge", 1) for e in edges] + [(e, "match", 3) for e in highlight]:
        stroke = "#444444" if cls == "edge" else "#c51b7d"
        ET.SubElement(g, "line", x1=f"{P[u, 0]:.9g}", y1=f"{P[u, 1]:.9g}", x2=f"{P[v, 0]:.9g}",
                      y2=f"{P[v, 1]:.9g}", stroke=stroke, **{"stroke-width": f"{width * unit:.6g}", "class": cls})
    for x, y in P:
        ET.SubElement(g, "circle", cx=f"{x:.9g}", cy=f"{y:.9g}", r=f"{2.5 * unit:.6g}", fill="#111111",
                      **{"class": "point"})
    return ET.tostring(root, encoding="unicode")


def render_svg(path, points=(), homothets=(), edges=(), highlight=(), project=False) -> Path:
    path = Path(path)
    path.write_text(scene_svg(points, list(homothets), list(edges), list(highlight), project))
    return path


def homothets_from_json(body, items):
    return [Homothet.make(body, h["center"], h["scale"]) for h in items]
