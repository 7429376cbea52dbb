"""Generalized Delaunay graphs of planar point sets, 2-point covers via matching, and structural checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .cover import Cover
from .geometry import (AXISBOX, BALL, ConvexBody, GeometryError, Homothet, bounding_diameter,
                       fatten, tol)
from .matching import Matching, adjacency, components_after_removal, max_matching

PENCIL_STEPS = 720


@dataclass
class Graph:
    n: int
    edges: list
    witnesses: dict = field(default_factory=dict)
    approximate: bool = False

    @property
    def adj(self):
        return adjacency(self.n, self.edges)

    def to_dict(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data):
        edges = sorted({(min(u, v), max(u, v)) for u, v in data["edges"]})
        return cls(int(data["n"]), edges)


def _check_planar_input(body, S):
    S = np.asarray(S, dtype=float)
    if body.d != 2 or S.ndim != 2 or S.shape[1] != 2:
        raise GeometryError("Delaunay graphs are planar only (d = 2)")
    if len(S) < 2:
        raise GeometryError("need at least two points")
    if len(np.unique(S, axis=0)) != len(S):
        raise GeometryError("duplicate points")
    return S


def _free_point(lo, hi, blo, bhi, eps):
    """A point of [lo, hi] outside every closed interval [blo_k, bhi_k], centered in the widest gap."""
    if hi - lo <= eps:
        x = 0.5 * (lo + hi)
        return x if not np.any((blo <= x + eps) & (bhi >= x - eps)) else None
    keep = (bhi >= lo - eps) & (blo <= hi + eps)
    blo, bhi = blo[keep], bhi[keep]
    order = np.argsort(blo)
    best, where = -1.0, None
    cur, closed = lo, True          # cur is free if closed is True
    for a, b in zip(blo[order], bhi[order]):
        if a > cur + eps or (closed and a > cur):
            width = a - cur
            if width > best:
                best, where = width, 0.5 * (cur + a)
        if b + eps > cur:
            cur, closed = b, False
    if cur < hi - eps or (closed and cur <= hi):
        width = hi - cur
        if width > best:
            best, where = width, 0.5 * (cur + hi) if not closed else cur
    if where is None or best <= eps:
        return None
    return where


def _ball_edges(S):
    n = len(S)
    edges, wit = [], {}
    scale = bounding_diameter(S) or 1.0
    for i in range(n - 1):
        a = S[i]
        B = S[i + 1:]
        mid = 0.5 * (a + B)
        u = B - a
        u /= np.linalg.norm(u, axis=1)[:, None]
        perp = np.stack([-u[:, 1], u[:, 0]], axis=1)
        qa = S[None, :, :] - a                       # (1, n, 2)
        qb = S[None, :, :] - B[:, None, :]           # (m, n, 2)
        A = np.einsum("jqd,jqd->jq", np.broadcast_to(qa, qb.shape), qb)
        C = -2.0 * np.einsum("qd,jd->jq", qa[0], perp)
        skip = np.zeros_like(A, dtype=bool)
        skip[:, i] = True
        skip[np.arange(len(B)), np.arange(i + 1, n)] = True
        with np.errstate(divide="ignore", invalid="ignore"):
            t = -A / C
        pos, neg, flat = (C > 0) & ~skip, (C < 0) & ~skip, (C == 0) & ~skip
        L = np.where(pos, t, -np.inf).max(axis=1)
        R = np.where(neg, t, np.inf).min(axis=1)
        blocked = (flat & (A <= 0)).any(axis=1)
        ok = (R - L > 1e-12 * scale) & ~blocked
        for jj in np.flatnonzero(ok):
            j = i + 1 + int(jj)
            c = _pencil_witness(S, i, j, mid[jj], perp[jj], L[jj], R[jj], scale)
            edges.append((i, j))
            wit[(i, j)] = (c, float(np.linalg.norm(a - c)))
    return edges, wit


def _pencil_offsets(lo, hi, scale):
    if np.isfinite(lo) and np.isfinite(hi):
        return lo + (hi - lo) * np.array([0.5, 0.25, 0.75, 0.1, 0.9])
    steps = scale * 2.0 ** np.arange(0, 40)
    if np.isfinite(lo):
        return lo + steps
    if np.isfinite(hi):
        return hi - steps
    return np.concatenate([[0.0], steps, -steps])


def _pencil_witness(S, i, j, mid, perp, lo, hi, scale):
    """Center of a disk through S[i], S[j] inside the open pencil interval (lo, hi).

    The first candidate is used when the other points clear the containment
    tolerance; near-collinear neighbours can need a center further out.
    """
    others = np.ones(len(S), dtype=bool)
    others[[i, j]] = False
    best, best_gap = None, -np.inf
    for tt in _pencil_offsets(lo, hi, scale):
        c = mid + tt * perp
        r = float(np.linalg.norm(S[i] - c))
        gap = (np.linalg.norm(S[others] - c, axis=1).min() - r - tol(r)) if others.any() else np.inf
        if gap > 0:
            return c
        if gap > best_gap:
            best, best_gap = c, gap
    return best


def _box_edges(S, hw):
    P = S / hw
    n = len(P)
    edges, wit = [], {}
    eps = 1e-12 * (bounding_diameter(P) or 1.0)
    for i in range(n - 1):
        for j in range(i + 1, n):
            a, b = P[i], P[j]
            d = np.abs(b - a)
            ell = d.max()
            ax = 0 if d[0] >= d[1] else 1      # fixed axis
            oy = 1 - ax
            xlo = min(a[ax], b[ax])
            ylo, yhi = max(a[oy], b[oy]) - ell, min(a[oy], b[oy])
            others = np.delete(P, [i, j], axis=0)
            inx = (others[:, ax] >= xlo - eps) & (others[:, ax] <= xlo + ell + eps)
            q = others[inx, oy]
            y0 = _free_point(ylo, yhi, q - ell, q, eps)
            if y0 is None:
                continue
            c = np.empty(2)
            c[ax], c[oy] = xlo + ell / 2, y0 + ell / 2
            edges.append((i, j))
            wit[(i, j)] = (c * hw, ell / 2)
    return edges, wit


def _polygon_edges(S, body, steps):
    V, N, H = body.verts, body.normals, body.offsets
    n = len(S)
    edges, wit = [], {}
    for i in range(n - 1):
        for j in range(i + 1, n):
            others = np.ascontiguousarray(np.delete(S, [i, j], axis=0))
            found, lam, cx, cy = _kernels.polygon_pencil_edge(S[i], S[j], others, V, N, H, steps, 1e-9)
            if found:
                edges.append((i, j))
                wit[(i, j)] = (np.array([cx, cy]), lam)
    return edges, wit


def delaunay_graph(body: ConvexBody, S, steps: int = PENCIL_STEPS) -> Graph:
    """Edge ij iff some homothet of ``body`` holds S_i and S_j and no other point of S.

    Balls and axis boxes are exact; polygons sweep ``steps`` members of the
    pencil of minimal homothets through each pair and are flagged approximate.
    """
    S = _check_planar_input(body, S)
    if body.kind == BALL:
        edges, wit = _ball_edges(S)
    elif body.kind == AXISBOX:
        edges, wit = _box_edges(S, np.asarray(body.halfwidths))
    else:
        edges, wit = _polygon_edges(S, body, steps)
    witnesses = {e: Homothet.make(body, c, s) for e, (c, s) in wit.items()}
    return Graph(len(S), edges, witnesses, approximate=body.is_polygon)


def matching_of(graph: Graph) -> Matching:
    return max_matching(graph.n, graph.edges)


def cover_pairs(body: ConvexBody, S, graph: Graph | None = None) -> Cover:
    """Cover by 2-point homothets of size |S| - |M| for a maximum matching M of the Delaunay graph."""
    S = np.asarray(S, dtype=float)
    graph = graph or delaunay_graph(body, S)
    M = matching_of(graph)
    tiny = 1e-12 * bounding_diameter(S)
    hs, members = [], []
    assignment = np.full(len(S), -1)
    for u, v in M.edges:
        h = graph.witnesses[(u, v)]
        assignment[[u, v]] = len(hs)
        hs.append(h)
        members.append(np.array([u, v]))
    for p in np.flatnonzero(assignment < 0):
        assignment[p] = len(hs)
        hs.append(Homothet.make(body, S[p], tiny))
        members.append(np.array([p]))
    return Cover(hs, assignment, members, 2, len(S), [{"matching": len(M), "certified": M.certified}])


# ---------------------------------------------------------------- structure checks

def crossing_edges(S, edges):
    """Pairs of edges whose segments cross at interior points."""
    S = np.asarray(S, dtype=float)
    E = np.asarray(edges, dtype=int).reshape(-1, 2)
    if len(E) < 2:
        return []
    P, Q = S[E[:, 0]], S[E[:, 1]]

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    out = []
    for e in range(len(E) - 1):
        p, q = P[e], Q[e]
        r, s = P[e + 1:], Q[e + 1:]
        shared = (E[e + 1:, 0] == E[e, 0]) | (E[e + 1:, 0] == E[e, 1]) | (E[e + 1:, 1] == E[e, 0]) | (E[e + 1:, 1] == E[e, 1])
        d1, d2 = orient(p, q, r), orient(p, q, s)
        d3, d4 = orient(r, s, p[None]), orient(r, s, q[None])
        hit = (d1 * d2 < 0) & (d3 * d4 < 0) & ~shared
        out.extend((e, e + 1 + int(f)) for f in np.flatnonzero(hit))
    return out


def bounded_faces(S, graph: Graph):
    """Bounded faces of the straight-line embedding, each as a CCW vertex list."""
    S = np.asarray(S, dtype=float)
    adj = graph.adj
    rot = []
    for v in range(graph.n):
        nb = adj[v]
        ang = [math.atan2(S[w, 1] - S[v, 1], S[w, 0] - S[v, 0]) for w in nb]
        rot.append([w for _, w in sorted(zip(ang, nb))])
    pos = [{w: k for k, w in enumerate(r)} for r in rot]
    seen = set()
    faces = []
    for u, v in [(u, v) for u, v in graph.edges] + [(v, u) for u, v in graph.edges]:
        if (u, v) in seen:
            continue
        face = []
        a, b = u, v
        while (a, b) not in seen:
            seen.add((a, b))
            face.append(a)
            r = rot[b]
            c = r[(pos[b][a] - 1) % len(r)]
            a, b = b, c
        pts = S[face]
        area = 0.5 * np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1])
        if area > 0:
            faces.append(face)
    return faces


@dataclass
class AngleReport:
    ok: bool
    bound: float
    worst: float
    violations: list
    checked: int


def _angle(p, q, r):
    u, v = p - q, r - q
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), float(u @ v))


def check_angle_property(body: ConvexBody, S, alpha: float | None = None, graph: Graph | None = None) -> AngleReport:
    """Opposite angles across each interior edge sum to at most 2*pi - 2*asin(alpha)."""
    S = np.asarray(S, dtype=float)
    graph = graph or delaunay_graph(body, S)
    alpha = fatten(body).alpha if alpha is None else alpha
    faces = bounded_faces(S, graph)
    if not faces or any(len(f) != 3 for f in faces) or crossing_edges(S, graph.edges):
        raise GeometryError("the Delaunay graph is not a triangulation")
    bound = 2 * math.pi - 2 * math.asin(min(1.0, alpha))
    opposite = {}
    for f in faces:
        for k in range(3):
            a, b, c = f[k], f[(k + 1) % 3], f[(k + 2) % 3]
            opposite.setdefault((min(a, c), max(a, c)), []).append(b)
    worst, bad, checked = 0.0, [], 0
    for (a, c), opp in opposite.items():
        if len(opp) != 2:
            continue
        b, d = opp
        total = _angle(S[a], S[b], S[c]) + _angle(S[c], S[d], S[a])
        checked += 1
        worst = max(worst, total)
        if total > bound + 1e-6:
            bad.append((a, c, total))
    return AngleReport(not bad, bound, worst, bad, checked)


def is_triangulation(S, graph: Graph) -> bool:
    try:
        faces = bounded_faces(S, graph)
    except (IndexError, KeyError):
        return False
    return bool(faces) and all(len(f) == 3 for f in faces) and not crossing_edges(S, graph.edges)


def independent_set_bound(n: int, alpha: float = 1.0) -> float:
    """Upper bound on independent sets of Delaunay graphs of alpha-fat bodies (angles in degrees)."""
    a = math.degrees(math.asin(alpha))
    return (450 - 4 * a) / (450 - 3 * a) * n + (90 - 2 * a) / (450 - 3 * a)


def toughness_bound(removed: int, alpha: float = 1.0) -> float:
    """Components of D - U are fewer than this for |U| = removed."""
    a = math.degrees(math.asin(alpha))
    return (450 - 4 * a) / a * removed + (2 * a - 90) / a


def matching_cover_bound(n: int) -> int:
    """n - ceil((n - 8) / 3)."""
    return n - math.ceil((n - 8) / 3)


def components_without(graph: Graph, removed) -> int:
    return components_after_removal(graph.n, graph.edges, removed)


def connected_within(graph: Graph, inside, p: int, q: int) -> bool:
    """Whether p and q are joined by a path through vertices of ``inside`` only."""
    inside = set(int(i) for i in inside)
    if p not in inside or q not in inside:
        return False
    adj = graph.adj
    stack, seen = [p], {p}
    while stack:
        v = stack.pop()
        if v == q:
            return True
        for w in adj[v]:
            if w in inside and w not in seen:
                seen.add(w)
                stack.append(w)
    return False
