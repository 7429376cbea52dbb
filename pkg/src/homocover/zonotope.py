"""Planar zonotopes (centrally symmetric polygons): vertex hitting, v/epsilon nets and facet-region covers."""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .cover import Cover, trim_scale
from .geometry import (ConvexBody, GaugeIndex, GeometryError, Homothet, gauge_many,
                       homothets_intersect, tol)
from .weaknet import NetRound, WeakNet, _check_epsilon, points_needed


def _check_zonotope(Z: ConvexBody):
    if not (Z.is_polygon and Z.symmetric):
        raise GeometryError("a planar zonotope is a centrally symmetric polygon")


def incidence_count(Z: ConvexBody) -> int:
    """Number of (facet, vertex-of-facet) pairs; 2v in the plane."""
    _check_zonotope(Z)
    return 2 * len(Z.verts)


def vertex_in_larger_homothet(Z: ConvexBody, h1: Homothet, h2: Homothet):
    """A vertex of h2 lying in h1 when they meet (h1 at least as large), else None."""
    _check_zonotope(Z)
    if h1.scale < h2.scale:
        raise GeometryError("the first homothet must be at least as large as the second")
    if h1.body != Z or h2.body != Z:
        raise GeometryError("homothets of a different body")
    if not homothets_intersect(h1, h2):
        return None
    V = h2.vertices()
    inside = np.flatnonzero(gauge_many(Z, V - h1.c) <= h1.scale + tol(h1.scale))
    if len(inside) == 0:
        raise GeometryError("intersecting homothets without a shared vertex; the body is not a zonotope")
    return V[inside[0]]


def _neighbors(P, Z, radius):
    """CSR lists of translates that can meet at scale <= radius."""
    idx = GaugeIndex(Z, P)
    lists = [idx.within(p, 2 * radius) for p in P]
    ptr = np.zeros(len(P) + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(x) for x in lists])
    nbr = np.concatenate(lists).astype(np.int64) if lists else np.zeros(0, dtype=np.int64)
    return ptr, nbr


def smallest_homothet(Z: ConvexBody, P, m: int, rel: float = 1e-12):
    """Smallest homothet of Z holding at least m of the points P, with no restriction on its center.

    The center-restricted optimum U bounds the answer in [U/2, U]; bisection on the
    scale then asks whether some point lies in m of the translates p - lam*Z.
    """
    P = np.ascontiguousarray(np.asarray(P, dtype=float))
    if not 1 <= m <= len(P):
        raise GeometryError("need 1 <= m <= |P|")
    kth = GaugeIndex(Z, P).kth(P, m)
    best = int(np.argmin(kth))
    hi = float(kth[best])
    center = P[best].copy()
    if m == 1 or hi == 0.0:
        return Homothet.make(Z, center, hi)
    V, N, H = Z.verts, Z.normals, Z.offsets
    ptr, nbr = _neighbors(P, Z, hi)
    lo = hi / 2
    while hi - lo > rel * hi:
        mid = 0.5 * (lo + hi)
        depth, x, y = _kernels.max_depth_translates(P, V, N, H, mid, m, ptr, nbr)
        if depth >= m:
            hi, center = mid, np.array([x, y])
        else:
            lo = mid
    h = Homothet.make(Z, center, hi)
    if len(h.covered(P)) < m:
        raise GeometryError("bisection lost the covering center")
    return h


def zonotope_weak_net(Z: ConvexBody, S, epsilon: float) -> WeakNet:
    """Weak epsilon-net made of the vertices of successive smallest homothets; at most v/epsilon points."""
    _check_zonotope(Z)
    _check_epsilon(epsilon)
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[1] != 2 or len(S) == 0:
        raise GeometryError("need a non-empty planar point set")
    m = points_needed(epsilon, len(S))
    alive = np.ones(len(S), dtype=bool)
    chunks, trace = [], []
    while alive.sum() >= m:
        idx = np.flatnonzero(alive)
        h = smallest_homothet(Z, S[idx], m)
        removed = idx[h.covered(S[idx])]
        alive[removed] = False
        chunks.append(h.vertices())
        trace.append(NetRound(h.center, h.scale, removed.tolist()))
    pts = np.vstack(chunks) if chunks else np.zeros((0, 2))
    if len(pts):
        _, first = np.unique(pts, axis=0, return_index=True)
        pts = pts[np.sort(first)]
    return WeakNet(pts, epsilon, 1.0, trace, per_round=len(Z.verts))


def facet_region(Z: ConvexBody, direction) -> int:
    """Index 2i (half of edge i next to vertex i) or 2i+1 (next to vertex i+1) hit by the ray.

    Directions on a shared boundary go to the smaller index.
    """
    d = np.asarray(direction, dtype=float)
    V, N, H = Z.verts, Z.normals, Z.offsets
    vals = (N @ d) / H
    g = vals.max()
    if g <= 0:
        return 0
    x = d / g
    nv = len(V)
    out = []
    for e in np.flatnonzero(vals >= g - 1e-12 * (1 + abs(g))):
        a, b = V[e], V[(e + 1) % nv]
        t = float((x - a) @ (b - a) / ((b - a) @ (b - a)))
        if t <= 0.5 + 1e-12:
            out.append(2 * e)
        if t >= 0.5 - 1e-12:
            out.append(2 * e + 1)
    return min(out)


def zonotope_neighborhood_cover(Z: ConvexBody, centers, scales, common) -> list:
    """At most 2v of the homothets (centers[i], scales[i]) covering all centers; all must contain ``common``."""
    _check_zonotope(Z)
    C = np.asarray(centers, dtype=float).reshape(-1, 2)
    scales = np.asarray(scales, dtype=float)
    common = np.asarray(common, dtype=float)
    miss = np.flatnonzero(gauge_many(Z, common - C) > scales + tol(scales))
    if len(miss):
        raise GeometryError(f"homothet {int(miss[0])} does not contain the common point")
    norms = gauge_many(Z, C - common)
    best = {}
    for i, (c, g) in enumerate(zip(C, norms)):
        r = facet_region(Z, c - common)
        if r not in best or g > norms[best[r]]:
            best[r] = i
    return sorted(best.values())


def zonotope_cover(Z: ConvexBody, S, k: int, strict: bool = True) -> Cover:
    """k-minus cover: v/epsilon net for epsilon = k/(2n) plus one region cover per net point."""
    _check_zonotope(Z)
    S = np.asarray(S, dtype=float)
    if k < 2 or len(S) < k:
        raise GeometryError("need 2 <= k <= |S|")
    n = len(S)
    net = zonotope_weak_net(Z, S, min(1.0, k / (2 * n)))
    index = GaugeIndex(Z, S)
    scales = np.array([trim_scale(Z, p, S, k, strict, index) for p in S])
    chosen = []
    for w in net.points:
        group = np.flatnonzero(gauge_many(Z, w - S) <= scales + tol(scales))
        if len(group):
            pick = zonotope_neighborhood_cover(Z, S[group], scales[group], w)
            chosen.extend(int(group[i]) for i in pick)
    chosen = sorted(set(chosen))
    hs, members = [], []
    assignment = np.full(n, -1)
    for p in chosen:
        h = Homothet.make(Z, S[p], scales[p])
        inside = index.within(S[p], scales[p])
        fresh = inside[assignment[inside] < 0]
        assignment[fresh] = len(hs)
        hs.append(h)
        members.append(inside)
    if (assignment < 0).any():
        raise GeometryError(f"net failed to reach point {int(np.flatnonzero(assignment < 0)[0])}")
    bound = 2 * len(Z.verts) * incidence_count(Z) * math.ceil(n / k)
    return Cover(hs, assignment, members, k, n, [{"net": len(net), "bound": bound}])
