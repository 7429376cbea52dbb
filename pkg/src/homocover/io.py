"""JSON encodings of bodies, point sets and results."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .geometry import (AXISBOX, BALL, POLYGON, SYMPOLYGON, AxisBox, Ball, ConvexBody, GeometryError,
                       Polygon, SymPolygon)


def body_to_dict(body: ConvexBody) -> dict:
    out = {"kind": body.kind, "d": body.d}
    if body.kind == AXISBOX:
        out["halfwidths"] = list(body.halfwidths)
    if body.is_polygon:
        out["vertices"] = [list(v) for v in body.vertices]
    return out


def body_from_dict(data: dict) -> ConvexBody:
    kind = data.get("kind")
    if kind == BALL:
        return Ball(int(data.get("d", 2)))
    if kind == AXISBOX:
        return AxisBox(data["halfwidths"])
    if kind == SYMPOLYGON:
        return SymPolygon(data["vertices"])
    if kind == POLYGON:
        return Polygon(data["vertices"])
    raise GeometryError(f"unknown body kind {kind!r}")


def points_from_dict(data) -> np.ndarray:
    if isinstance(data, dict):
        pts = np.asarray(data.get("points", []), dtype=float)
        d = int(data.get("d", pts.shape[1] if pts.ndim == 2 and len(pts) else 2))
    else:
        pts, d = np.asarray(data, dtype=float), None
    if pts.size == 0:
        return np.zeros((0, d or 2))
    if pts.ndim != 2 or (d is not None and pts.shape[1] != d):
        raise GeometryError("points must be a list of d-dimensional coordinates")
    if not np.isfinite(pts).all():
        raise GeometryError("points must be finite")
    return pts


def points_to_dict(S) -> dict:
    S = np.asarray(S, dtype=float)
    return {"d": int(S.shape[1]) if S.ndim == 2 else 2, "points": S.tolist()}


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot encode {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_default, sort_keys=True, indent=1)


def write_json(path, obj):
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())
