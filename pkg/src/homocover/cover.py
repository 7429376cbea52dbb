"""k-minus covers of point sets by homothets: the net-based ball algorithm and a greedy for general bodies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (BALL, Ball, ConvexBody, DegenerateInputError, GaugeIndex, GeometryError,
                       Homothet, fatten, gauge_many, intersect_mask, tol)
from .weaknet import build_weak_net


@dataclass
class Validity:
    ok: bool
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


@dataclass
class Cover:
    homothets: list
    assignment: np.ndarray
    members: list
    k: int
    n: int
    trace: list = field(default_factory=list)

    def __len__(self):
        return len(self.homothets)

    @property
    def size_ratio(self) -> float:
        return len(self) / (self.n / self.k) if self.n else 0.0

    def to_dict(self, valid=None):
        return {"homothets": [h.to_dict() for h in self.homothets],
                "assignment": [int(a) for a in self.assignment],
                "valid": bool(valid) if valid is not None else None,
                "sizeRatio": self.size_ratio}


def validate_cover(cover: Cover, S, k=None) -> Validity:
    """Recount: every homothet holds at most k points and every point sits in its assigned homothet."""
    S = np.asarray(S, dtype=float)
    k = cover.k if k is None else k
    problems = []
    seen = np.zeros(len(S), dtype=bool)
    for i, h in enumerate(cover.homothets):
        inside = h.covered(S)
        if len(inside) > k:
            problems.append(f"homothet {i} holds {len(inside)} > {k} points")
        seen[inside] = True
    if not seen.all():
        problems.append(f"{int((~seen).sum())} points uncovered")
    if len(cover.assignment) != len(S):
        problems.append("assignment length differs from point count")
    else:
        for p, a in enumerate(cover.assignment):
            if not (0 <= a < len(cover.homothets)) or not cover.homothets[a].contains(S[p]):
                problems.append(f"point {p} not inside its assigned homothet {a}")
                break
    if len(cover.homothets) < math.ceil(len(S) / k):
        problems.append("fewer homothets than ceil(n/k)")
    return Validity(not problems, problems)


def trim_scale(body: ConvexBody, center, S, k: int, strict: bool = True, index=None) -> float:
    """Scale for a homothet at ``center`` holding between ceil(k/2) and k points of S.

    Picks the midpoint of the ceil(k/2)-th and (k+1)-th gauge values.  When a
    boundary tie leaves no such gap, ``strict`` raises; otherwise the largest
    achievable count at most k is used.
    """
    index = index or GaugeIndex(body, S)
    g = index.smallest(center, k + 1)
    n = len(g)
    if n <= k:
        return float(g[-1])
    lo = math.ceil(k / 2)
    a, b = g[lo - 1], g[k]
    if b - a > 2 * tol(b):
        return float(0.5 * (a + b))
    if strict:
        raise DegenerateInputError(
            f"homothet boundary at center {tuple(np.round(center, 12))} with scale {b:.12g} "
            f"passes through too many points: every scale holding {lo} points holds more than {k}")
    for j in range(min(k, n - 1), 0, -1):
        if g[j] - g[j - 1] > 2 * tol(g[j]):
            return float(0.5 * (g[j - 1] + g[j]))
    raise DegenerateInputError(f"more than {k} points coincide at {tuple(center)}")


def approx_k_ball(S, k: int) -> Homothet:
    """Smallest disk centered at an input point holding k points; radius within 2x the optimum."""
    S = np.asarray(S, dtype=float)
    if not 1 <= k <= len(S):
        raise GeometryError(f"need 1 <= k <= |S| (k={k}, |S|={len(S)})")
    body = Ball(S.shape[1])
    vals = GaugeIndex(body, S).kth(S, k)
    i = int(np.argmin(vals))
    return Homothet.make(body, S[i], vals[i])


class _Builder:
    def __init__(self, body, S, k, strict):
        self.body, self.S, self.k, self.strict = body, S, k, strict
        self.homothets, self.members = [], []
        self.assignment = np.full(len(S), -1)
        self.trace = []
        self.index = GaugeIndex(body, S)

    def emit(self, center, note=None):
        scale = trim_scale(self.body, center, self.S, self.k, self.strict, self.index)
        h = Homothet.make(self.body, center, scale)
        inside = self.index.within(center, scale)
        fresh = inside[self.assignment[inside] < 0]
        self.assignment[fresh] = len(self.homothets)
        self.homothets.append(h)
        self.members.append(inside)
        if note is not None:
            self.trace.append(note)
        return inside

    def uncovered(self, idx):
        return self.assignment[idx] < 0

    def result(self):
        return Cover(self.homothets, self.assignment, self.members, self.k, len(self.S), self.trace)


def _check_cover_input(S, k):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2:
        raise GeometryError("points must form an (n, d) array")
    if k < 2:
        raise GeometryError("k must be at least 2")
    if len(S) < k:
        raise GeometryError(f"need |S| >= k (|S|={len(S)}, k={k})")
    return S


def cover_net_based(S, k: int, strict: bool = True) -> Cover:
    """Ball cover built around a weak net of the ceil(k/2)-point disks."""
    S = _check_cover_input(S, k)
    n, d = S.shape
    body = Ball(d)
    m = math.ceil(k / 2)
    net = build_weak_net(body, S, k / (2 * n), 2.0)
    radii = GaugeIndex(body, S).kth(S, m)
    dist, owner = cKDTree(net.points).query(S)
    bad = np.flatnonzero(dist > radii + tol(radii))
    if len(bad):
        raise GeometryError(f"net misses the {m}-point disk at point {int(bad[0])}")
    b = _Builder(body, S, k, strict)
    for w in np.unique(owner):
        group = np.flatnonzero(owner == w)
        order = group[np.argsort(-gauge_many(body, S[group] - net.points[w]), kind="stable")]
        for p in order:
            if b.uncovered(p):
                b.emit(S[p], {"net": int(w), "center": int(p)})
    return b.result()


def neighborhood_cover(body: ConvexBody, centers, scales, common) -> list:
    """Indices of a subfamily of homothets (centers[i], scales[i]) whose union holds every center.

    All homothets must contain ``common``.  Works greedily from the center
    farthest from ``common`` in fattened coordinates.
    """
    C = np.asarray(centers, dtype=float).reshape(-1, body.d)
    scales = np.asarray(scales, dtype=float)
    common = np.asarray(common, dtype=float)
    g = gauge_many(body, common - C)
    miss = np.flatnonzero(g > scales + tol(scales))
    if len(miss):
        raise GeometryError(f"homothet {int(miss[0])} does not contain the common point")
    cert = fatten(body)
    norm = np.linalg.norm(cert.apply(C) - cert.apply(common[None, :]), axis=1)
    left = np.ones(len(C), dtype=bool)
    chosen = []
    for i in np.argsort(-norm, kind="stable"):
        if not left[i]:
            continue
        chosen.append(int(i))
        left &= ~(gauge_many(body, C - C[i]) <= scales[i] + tol(scales[i]))
    return chosen


def cover_greedy(body: ConvexBody, S, k: int, strict: bool = True) -> Cover:
    """Cover by repeatedly clearing the satellites of the smallest remaining ceil(k/2)-point homothet."""
    S = _check_cover_input(S, k)
    if S.shape[1] != body.d:
        raise GeometryError("dimension mismatch between body and points")
    m = math.ceil(k / 2)
    scales = GaugeIndex(body, S).kth(S, m)
    order = np.argsort(scales, kind="stable")
    b = _Builder(body, S, k, strict)
    for p0 in order:
        if not b.uncovered(p0):
            continue
        open_idx = np.flatnonzero(b.assignment < 0)
        sat = open_idx[intersect_mask(body, S[p0], scales[p0], S[open_idx], scales[open_idx])]
        far = gauge_many(body, S[sat] - S[p0])
        emitted = 0
        for q in sat[np.argsort(-far, kind="stable")]:
            if b.uncovered(q):
                b.emit(S[q])
                emitted += 1
        b.trace.append({"anchor": int(p0), "satellites": len(sat), "emitted": emitted})
    return b.result()


def cover(body: ConvexBody, S, k: int, method: str = "auto", strict: bool = True) -> Cover:
    if method == "auto":
        method = "net" if body.kind == BALL else "greedy"
    if method == "net":
        if body.kind != BALL:
            raise GeometryError("the net-based cover is implemented for balls only")
        return cover_net_based(S, k, strict)
    if method == "greedy":
        return cover_greedy(body, S, k, strict)
    raise GeometryError(f"unknown cover method {method!r}")
