"""Convex bodies, homothets, gauge predicates and the grid hitting sets.

Every body is stored with its origin strictly inside, so a homothet
``scale * body + center`` contains ``q`` exactly when
``gauge(body, q - center) <= scale``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import cKDTree

EPS = 1e-9

BALL = "ball"
AXISBOX = "axisbox"
SYMPOLYGON = "sympolygon"
POLYGON = "polygon"
KINDS = (BALL, AXISBOX, SYMPOLYGON, POLYGON)


class GeometryError(ValueError):
    pass


class DegenerateInputError(GeometryError):
    """Raised when boundary ties make a requested guarantee impossible."""


def tol(scale):
    return EPS * (1.0 + scale)


@dataclass(frozen=True, eq=False)
class ConvexBody:
    kind: str
    d: int
    halfwidths: tuple = ()
    vertices: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown body kind {self.kind!r}")
        if self.d < 1:
            raise GeometryError("dimension must be >= 1")
        if self.kind == AXISBOX:
            if len(self.halfwidths) != self.d or min(self.halfwidths) <= 0:
                raise GeometryError("axisbox needs d positive half-widths")
        if self.kind in (SYMPOLYGON, POLYGON):
            if self.d != 2:
                raise GeometryError("polygon bodies are planar")
            _check_polygon(np.asarray(self.vertices, dtype=float))
            if self.kind == SYMPOLYGON:
                v = np.asarray(self.vertices, dtype=float)
                m = len(v)
                if m % 2 or not np.allclose(v, -np.roll(v, -m // 2, axis=0), atol=1e-12):
                    raise GeometryError("sympolygon vertices must satisfy v[i] = -v[i + m/2]")

    def __eq__(self, other):
        return (isinstance(other, ConvexBody) and self.kind == other.kind and self.d == other.d
                and tuple(self.halfwidths) == tuple(other.halfwidths)
                and tuple(map(tuple, self.vertices)) == tuple(map(tuple, other.vertices)))

    def __hash__(self):
        return hash((self.kind, self.d, tuple(self.halfwidths), tuple(map(tuple, self.vertices))))

    @property
    def is_polygon(self):
        return self.kind in (SYMPOLYGON, POLYGON)

    @property
    def symmetric(self):
        if self.kind == POLYGON:
            return self.asymmetry <= 1 + 1e-12
        return True

    @cached_property
    def verts(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @cached_property
    def normals(self) -> np.ndarray:
        """Outward unit normals, one per edge ``v[i] -> v[i+1]``."""
        e = np.roll(self.verts, -1, axis=0) - self.verts
        n = np.column_stack([e[:, 1], -e[:, 0]])
        return n / np.linalg.norm(n, axis=1)[:, None]

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.normals, self.verts)

    @cached_property
    def asymmetry(self) -> float:
        """max gauge(-x)/gauge(x); 1 for centrally symmetric bodies."""
        if not self.is_polygon:
            return 1.0
        return float(gauge_many(self, -self.verts).max())


def _check_polygon(v):
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise GeometryError("polygon needs at least 3 planar vertices")
    e = np.roll(v, -1, axis=0) - v
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    if np.any(cross <= 1e-12 * np.max(np.abs(v)) ** 2):
        raise GeometryError("polygon vertices must be counter-clockwise and strictly convex")
    # origin strictly interior: every edge line has the origin on its inner side
    n = np.column_stack([e[:, 1], -e[:, 0]])
    if np.any(np.einsum("ij,ij->i", n, v) <= 0):
        raise GeometryError("origin must lie strictly inside the polygon")


def Ball(d=2):
    return ConvexBody(BALL, d)


def AxisBox(halfwidths):
    hw = tuple(float(w) for w in halfwidths)
    return ConvexBody(AXISBOX, len(hw), halfwidths=hw)


def SymPolygon(vertices):
    return ConvexBody(SYMPOLYGON, 2, vertices=tuple(tuple(map(float, p)) for p in vertices))


def Polygon(vertices):
    return ConvexBody(POLYGON, 2, vertices=tuple(tuple(map(float, p)) for p in vertices))


def regular_polygon(m, radius=1.0, rotation=0.0):
    """Regular m-gon centered at the origin; symmetric when m is even."""
    a = rotation + 2 * np.pi * np.arange(m) / m
    v = np.column_stack([radius * np.cos(a), radius * np.sin(a)])
    if m % 2 == 0:
        v[m // 2:] = -v[: m // 2]
        return SymPolygon(v)
    return Polygon(v)


@dataclass(frozen=True, eq=False)
class Homothet:
    body: ConvexBody
    center: tuple
    scale: float

    def __post_init__(self):
        if not self.scale >= 0 or not math.isfinite(self.scale):
            raise GeometryError(f"homothet scale must be a finite non-negative number, got {self.scale}")
        if len(self.center) != self.body.d:
            raise GeometryError("center dimension does not match body")

    @classmethod
    def make(cls, body, center, scale):
        return cls(body, tuple(float(c) for c in np.ravel(center)), float(scale))

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    def vertices(self) -> np.ndarray:
        if not self.body.is_polygon:
            raise GeometryError("only polygon homothets have vertices")
        return self.c + self.scale * self.body.verts

    def contains(self, q) -> bool:
        return homothet_contains(self, q)

    def covered(self, S) -> np.ndarray:
        """Indices of the rows of S lying in the closed homothet."""
        S = np.asarray(S, dtype=float)
        if len(S) == 0:
            return np.zeros(0, dtype=int)
        return np.flatnonzero(gauge_many(self.body, S - self.c) <= self.scale + tol(self.scale))

    def to_dict(self):
        return {"center": list(self.center), "scale": self.scale}


def _as_points(x, d):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != d:
        raise GeometryError(f"dimension mismatch: expected {d}, got {x.shape[-1]}")
    return x


def gauge_many(body: ConvexBody, X) -> np.ndarray:
    """Minkowski functional of ``body`` evaluated on each row of X."""
    X = _as_points(X, body.d)
    if body.kind == BALL:
        return np.linalg.norm(X, axis=-1)
    if body.kind == AXISBOX:
        return np.max(np.abs(X) / np.asarray(body.halfwidths), axis=-1)
    vals = (X @ body.normals.T) / body.offsets
    return np.maximum(vals.max(axis=-1), 0.0)


def gauge(body: ConvexBody, x) -> float:
    x = _as_points(x, body.d)
    if x.ndim != 1:
        raise GeometryError("gauge expects a single point")
    return float(gauge_many(body, x[None, :])[0])


def homothet_contains(h: Homothet, q) -> bool:
    q = _as_points(q, h.body.d)
    return gauge(h.body, q - h.c) <= h.scale + tol(h.scale)


def support(body: ConvexBody, u) -> float:
    """max <u, x> over x in body."""
    u = np.asarray(u, dtype=float)
    if body.kind == BALL:
        return float(np.linalg.norm(u))
    if body.kind == AXISBOX:
        return float(np.abs(u) @ np.asarray(body.halfwidths))
    return float((body.verts @ u).max())


def homothets_intersect(h1: Homothet, h2: Homothet) -> bool:
    if h1.body != h2.body:
        raise GeometryError("homothets of different bodies")
    body = h1.body
    slack = tol(h1.scale + h2.scale)
    if body.symmetric:
        return gauge(body, h2.c - h1.c) <= h1.scale + h2.scale + slack
    # separating axis test; the edge normals of C and -C are the candidate axes
    for n in np.vstack([body.normals, -body.normals]):
        hi1 = n @ h1.c + h1.scale * support(body, n)
        lo2 = n @ h2.c - h2.scale * support(body, -n)
        if hi1 < lo2 - slack:
            return False
    return True


def intersect_mask(body: ConvexBody, c0, s0, C, s) -> np.ndarray:
    """Vectorized homothets_intersect of (c0, s0) against each (C[i], s[i])."""
    C = _as_points(C, body.d).reshape(-1, body.d)
    s = np.asarray(s, dtype=float)
    c0 = np.asarray(c0, dtype=float)
    slack = tol(s0 + s)
    if body.symmetric:
        return gauge_many(body, C - c0) <= s0 + s + slack
    ok = np.ones(len(C), dtype=bool)
    for n in np.vstack([body.normals, -body.normals]):
        hi1 = n @ c0 + s0 * support(body, n)
        lo2 = C @ n - s * support(body, -n)
        ok &= ~(hi1 < lo2 - slack)
        hi2 = C @ n + s * support(body, n)
        lo1 = n @ c0 - s0 * support(body, -n)
        ok &= ~(hi2 < lo1 - slack)
    return ok


@dataclass(frozen=True)
class FatnessCert:
    """Affine map T(x) = matrix @ x + shift with B(in_center, in_radius) <= T(C) <= B(in_center, out_radius)."""

    matrix: np.ndarray = field(repr=False)
    shift: np.ndarray = field(repr=False)
    alpha: float
    in_center: np.ndarray
    in_radius: float
    out_radius: float

    def apply(self, X):
        return np.asarray(X, dtype=float) @ self.matrix.T + self.shift

    def inverse(self, Y):
        return np.linalg.solve(self.matrix, (np.asarray(Y, dtype=float) - self.shift).T).T


def chebyshev_center(vertices):
    """Largest inscribed disk of a convex polygon via its edge half-planes."""
    v = np.asarray(vertices, dtype=float)
    e = np.roll(v, -1, axis=0) - v
    n = np.column_stack([e[:, 1], -e[:, 0]])
    n /= np.linalg.norm(n, axis=1)[:, None]
    b = np.einsum("ij,ij->i", n, v)
    # variables (cx, cy, r): maximize r subject to n.c + r <= b
    res = linprog([0, 0, -1], A_ub=np.column_stack([n, np.ones(len(n))]), b_ub=b,
                  bounds=[(None, None), (None, None), (0, None)], method="highs")
    if res.status != 0 or res.x[2] <= 0:
        raise GeometryError("degenerate polygon: no inscribed disk")
    return res.x[:2], float(res.x[2])


def fatten(body: ConvexBody) -> FatnessCert:
    d = body.d
    if body.kind == BALL:
        return FatnessCert(np.eye(d), np.zeros(d), 1.0, np.zeros(d), 1.0, 1.0)
    if body.kind == AXISBOX:
        A = np.diag(1.0 / np.asarray(body.halfwidths))
        return FatnessCert(A, np.zeros(d), 1 / math.sqrt(d), np.zeros(d), 1.0, math.sqrt(d))
    center, r = chebyshev_center(body.verts)
    R = float(np.linalg.norm(body.verts - center, axis=1).max())
    return FatnessCert(np.eye(2), -center, r / R, np.zeros(2), r, R)


def _axis_grid(half, step):
    """Lattice coordinates strictly inside (-half, half); the cheaper of two offsets."""
    best = None
    for offset in (0.0, 0.5):
        jmax = math.floor(half / step - offset)
        js = np.arange(-jmax - 1, jmax + 2) + offset
        pts = js[np.abs(js * step) < half] * step
        if best is None or len(pts) < len(best):
            best = pts
    return best


def hitting_set(body: ConvexBody, min_coeff: float = 1.0) -> np.ndarray:
    """Points hitting every homothet of ``body`` that meets it and has coefficient >= min_coeff.

    Built in fattened coordinates as an axis grid of spacing 2*c*r/sqrt(d)
    inside the open cube of half-width (2 + c) * max(d*r, R), then mapped back.
    """
    if not 0 < min_coeff <= 1:
        raise GeometryError("min_coeff must lie in (0, 1]")
    cert = fatten(body)
    d = body.d
    r, R = cert.in_radius, cert.out_radius
    step = 2 * min_coeff * r / math.sqrt(d)
    half = (2 + min_coeff) * max(d * r, R)
    axis = _axis_grid(half, step)
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    return cert.inverse(grid + cert.in_center)


def hitting_set_bound(d: int, min_coeff: float) -> float:
    return ((2 + min_coeff) * d * math.sqrt(d) / min_coeff + 1) ** d


def place(points, h: Homothet) -> np.ndarray:
    """Map body-frame points into the frame of homothet h."""
    return h.c + h.scale * np.asarray(points, dtype=float)


def kth_gauge(body: ConvexBody, p, S, m) -> float:
    S = _as_points(S, body.d)
    if not 1 <= m <= len(S):
        raise GeometryError(f"need 1 <= m <= |S| (m={m}, |S|={len(S)})")
    g = gauge_many(body, S - np.asarray(p, dtype=float))
    return float(np.partition(g, m - 1)[m - 1])


def smallest_homothet_at(body: ConvexBody, p, S, m) -> Homothet:
    """Smallest homothet centered at p holding at least m points of S (p counts if it is in S)."""
    return Homothet.make(body, p, kth_gauge(body, p, S, m))


class GaugeIndex:
    """k-nearest and range queries in the gauge of ``body``.

    Balls and boxes query a KD-tree directly (Euclidean / Chebyshev metric
    after rescaling).  Polygon gauges are sandwiched between |x|/R and |x|/r,
    so a Euclidean KD-tree yields a candidate superset that is then filtered.
    """

    def __init__(self, body: ConvexBody, S):
        self.body = body
        self.S = _as_points(S, body.d)
        self.exact = not body.is_polygon
        if body.kind == BALL:
            self._scale, self._p = 1.0, 2
        elif body.kind == AXISBOX:
            self._scale, self._p = 1.0 / np.asarray(body.halfwidths), np.inf
        else:
            self._scale, self._p = 1.0, 2
            self._r = float(body.offsets.min())
            self._R = float(np.linalg.norm(body.verts, axis=1).max())
        self._tree = cKDTree(self.S * self._scale) if len(self.S) else None

    def _candidates(self, p, radius):
        return np.asarray(self._tree.query_ball_point(p, radius * self._R * (1 + 1e-12) + tol(radius)), dtype=int)

    def smallest(self, p, m) -> np.ndarray:
        """The m smallest gauge values gauge(s - p), sorted (fewer if |S| < m)."""
        p = np.asarray(p, dtype=float)
        m = min(m, len(self.S))
        if m == 0:
            return np.zeros(0)
        if self.exact:
            dist, _ = self._tree.query(p * self._scale, k=m, p=self._p)
            return np.atleast_1d(dist)
        _, idx = self._tree.query(p, k=m)
        bound = gauge_many(self.body, self.S[np.atleast_1d(idx)] - p).max()
        g = gauge_many(self.body, self.S[self._candidates(p, bound)] - p)
        return np.sort(np.partition(g, m - 1)[:m]) if m < len(g) else np.sort(g)

    def kth(self, P, m) -> np.ndarray:
        """m-th smallest gauge(s - p) over s in S, for each row p of P (inf when |S| < m)."""
        P = _as_points(P, self.body.d).reshape(-1, self.body.d)
        if len(P) == 0:
            return np.zeros(0)
        if m > len(self.S):
            return np.full(len(P), np.inf)
        if self.exact:
            dist, _ = self._tree.query(P * self._scale, k=[m], p=self._p)
            return dist[:, 0]
        return np.array([self.smallest(p, m)[-1] for p in P])

    def within(self, p, radius) -> np.ndarray:
        """Sorted indices of points with gauge(s - p) <= radius (closed, tolerant)."""
        p = np.asarray(p, dtype=float)
        if self._tree is None:
            return np.zeros(0, dtype=int)
        if self.exact:
            idx = self._tree.query_ball_point(p * self._scale, radius + tol(radius), p=self._p)
            return np.sort(np.asarray(idx, dtype=int))
        cand = self._candidates(p, radius)
        keep = gauge_many(self.body, self.S[cand] - p) <= radius + tol(radius)
        return np.sort(cand[keep])

    def count_within(self, P, radii) -> np.ndarray:
        P = _as_points(P, self.body.d).reshape(-1, self.body.d)
        radii = np.broadcast_to(np.asarray(radii, dtype=float), (len(P),))
        if self.exact and self._tree is not None:
            return np.asarray(self._tree.query_ball_point(
                P * self._scale, radii + tol(radii), p=self._p, return_length=True))
        return np.array([len(self.within(p, r)) for p, r in zip(P, radii)])


def bounding_diameter(S) -> float:
    S = np.asarray(S, dtype=float)
    if len(S) == 0:
        return 0.0
    return float(np.linalg.norm(S.max(axis=0) - S.min(axis=0)))
