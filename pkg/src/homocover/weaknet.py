"""Greedy weak epsilon-nets for the range space of homothets, and their audit."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .geometry import (AXISBOX, BALL, ConvexBody, GaugeIndex, GeometryError, Homothet,
                       gauge_many, hitting_set, place, tol)


def points_needed(epsilon: float, n: int) -> int:
    """ceil(epsilon * n), robust to representation error such as 0.1 * 200."""
    return max(1, math.ceil(round(epsilon * n, 9)))


@dataclass
class NetRound:
    center: tuple
    scale: float
    removed: list
    tie: bool = False


@dataclass
class WeakNet:
    points: np.ndarray
    epsilon: float
    approx_factor: float
    trace: list = field(default_factory=list)
    per_round: int = 0

    @property
    def rounds(self) -> int:
        return len(self.trace)

    def __len__(self):
        return len(self.points)

    def to_dict(self):
        return {"d": int(self.points.shape[1]) if self.points.ndim == 2 else 0,
                "points": self.points.tolist(), "epsilon": self.epsilon,
                "approxFactor": self.approx_factor, "rounds": self.rounds}


def guaranteed_factor(body: ConvexBody) -> float:
    # center-restricted search loses a factor 1 + max gauge(-x)/gauge(x)
    return 1.0 + body.asymmetry


def _check_epsilon(epsilon):
    if not 0 < epsilon <= 1:
        raise GeometryError(f"epsilon must lie in (0, 1], got {epsilon}")


class CenterRestrictedSearch:
    """Smallest homothet centered at a remaining point covering m remaining points.

    The m-th gauge at a fixed center only grows as points are removed, so a
    heap of stale values stays a valid lower bound and is refreshed lazily.
    """

    def __init__(self, body: ConvexBody, S, m: int):
        self.body = body
        self.S = np.asarray(S, dtype=float)
        self.m = m
        self.alive = np.ones(len(self.S), dtype=bool)
        self.stamp = 0
        vals = GaugeIndex(body, self.S).kth(self.S, m) if len(self.S) >= m else np.full(len(self.S), np.inf)
        self.heap = [(float(v), i, 0) for i, v in enumerate(vals)]
        heapq.heapify(self.heap)

    @property
    def remaining(self) -> int:
        return int(self.alive.sum())

    def _value(self, i):
        g = gauge_many(self.body, self.S[self.alive] - self.S[i])
        if len(g) < self.m:
            return np.inf
        return float(np.partition(g, self.m - 1)[self.m - 1])

    def pop(self):
        """Return (index, scale, tie) of the current minimum, lowest index on ties."""
        while self.heap:
            v, i, st = heapq.heappop(self.heap)
            if not self.alive[i]:
                continue
            if st == self.stamp:
                tie = any(self.alive[j] and w == v for w, j, _ in self.heap[:3])
                return i, v, tie
            heapq.heappush(self.heap, (self._value(i), i, self.stamp))
        raise GeometryError("no remaining centers")

    def remove(self, idx):
        self.alive[idx] = False
        self.stamp += 1


def build_weak_net(body: ConvexBody, S, epsilon: float, approx_factor: float | None = None) -> WeakNet:
    """Weak epsilon-net for homothets of ``body`` with respect to S.

    Each round extracts an approximately smallest homothet holding
    ceil(epsilon*|S|) of the remaining points, adds the hitting set for
    coefficient 1/approx_factor placed on it, and discards its points.
    """
    _check_epsilon(epsilon)
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or len(S) == 0:
        raise GeometryError("need a non-empty point set")
    if S.shape[1] != body.d:
        raise GeometryError("dimension mismatch between body and points")
    need = guaranteed_factor(body)
    if approx_factor is None:
        approx_factor = need
    if approx_factor < need - 1e-12:
        raise GeometryError(f"center-restricted extraction only guarantees factor {need:g}")
    n = len(S)
    m = points_needed(epsilon, n)
    template = hitting_set(body, 1.0 / approx_factor)
    search = CenterRestrictedSearch(body, S, m)
    chunks, trace = [], []
    while search.remaining >= m:
        i, scale, tie = search.pop()
        h = Homothet.make(body, S[i], scale)
        alive_idx = np.flatnonzero(search.alive)
        inside = gauge_many(body, S[alive_idx] - h.c) <= scale + tol(scale)
        removed = alive_idx[inside]
        search.remove(removed)
        chunks.append(place(template, h))
        trace.append(NetRound(h.center, scale, removed.tolist(), tie))
    pts = np.vstack(chunks) if chunks else np.zeros((0, body.d))
    if len(pts):
        _, first = np.unique(pts, axis=0, return_index=True)
        pts = pts[np.sort(first)]
    return WeakNet(pts, epsilon, approx_factor, trace, per_round=len(template))


@dataclass
class HitReport:
    passed: bool
    mode: str
    witness: Homothet | None = None
    witness_count: int = 0
    checked: int = 0

    def __bool__(self):
        return self.passed


def _locations(S):
    loc, inv = np.unique(S, axis=0, return_inverse=True)
    return loc, np.bincount(inv.ravel(), minlength=len(loc)).astype(float)


def _exact_witness(body, S, W, m):
    """A W-free homothet holding >= m points of S, or None.  Planar balls and boxes only."""
    n = len(S)
    if len(W) == 0:
        if n >= m:
            c = S.mean(axis=0)
            return Homothet.make(body, c, gauge_many(body, S - c).max())
        return None
    loc, w = _locations(S)
    if body.kind == AXISBOX:
        hw = np.asarray(body.halfwidths)
        loc_s, W_s = loc / hw, W / hw
    else:
        loc_s, W_s = loc, W
    # a location with enough multiplicity is its own zero-size range
    wset = {tuple(p) for p in W_s}
    for p, c in zip(loc_s, w):
        if c >= m and tuple(p) not in wset:
            center = p * (hw if body.kind == AXISBOX else 1.0)
            return Homothet.make(body, center, 0.0)
    if len(loc) < 2:
        return None
    if body.kind == BALL:
        cnt, i, j, t = _kernels.disk_pencil_search(loc_s, w, W_s, float(m))
        if cnt >= m:
            a, b = loc_s[i], loc_s[j]
            u = (b - a) / np.linalg.norm(b - a)
            c = 0.5 * (a + b) + t * np.array([-u[1], u[0]])
            return Homothet.make(body, c, np.linalg.norm(a - c))
        return None
    for swap in (False, True):
        A = loc_s[:, ::-1] if swap else loc_s
        B = W_s[:, ::-1] if swap else W_s
        oa = np.lexsort((A[:, 1], A[:, 0]))
        A, wa = np.ascontiguousarray(A[oa]), w[oa]
        B = np.ascontiguousarray(B[np.argsort(B[:, 0], kind="stable")])
        cnt, i, j, y0 = _kernels.square_slide_search(A, wa, B, float(m))
        if cnt >= m:
            ell = A[j, 0] - A[i, 0]
            c = np.array([A[i, 0] + ell / 2, y0 + ell / 2])
            if swap:
                c = c[::-1]
            return Homothet.make(body, c * hw, ell / 2)
    return None


def _sample_centers(S, count, rng):
    n = len(S)
    kind = rng.integers(0, 3, size=count)
    idx = rng.integers(0, n, size=(count, 3))
    c = S[idx[:, 0]].copy()
    two = kind == 1
    c[two] = 0.5 * (S[idx[two, 0]] + S[idx[two, 1]])
    three = kind == 2
    c[three] = (S[idx[three, 0]] + S[idx[three, 1]] + S[idx[three, 2]]) / 3
    return c


def verify_hitting(net, body: ConvexBody, S, epsilon: float, mode: str = "auto",
                   samples: int = 100_000, seed: int = 0) -> HitReport:
    """Check that every homothet holding >= epsilon*|S| points of S contains a net point.

    ``exact`` is available for planar balls and axis boxes; ``random`` samples
    homothets anchored at points, pair midpoints and triple centroids of S.
    """
    _check_epsilon(epsilon)
    W = np.asarray(net.points if isinstance(net, WeakNet) else net, dtype=float).reshape(-1, body.d)
    S = np.asarray(S, dtype=float)
    m = points_needed(epsilon, len(S))
    exact_ok = body.d == 2 and body.kind in (BALL, AXISBOX)
    if mode == "auto":
        mode = "exact" if exact_ok else "random"
    if mode == "exact":
        if not exact_ok:
            raise GeometryError("exact hitting audit needs a planar ball or axis box")
        wit = _exact_witness(body, S, W, m)
        if wit is None:
            return HitReport(True, mode)
        return HitReport(False, mode, wit, len(wit.covered(S)))
    if mode != "random":
        raise GeometryError(f"unknown audit mode {mode!r}")
    rng = np.random.default_rng(seed)
    checked = 0
    chunk = max(1, min(2048, 2_000_000 // max(1, len(S) + len(W))))
    while checked < samples:
        c = _sample_centers(S, min(chunk, samples - checked), rng)
        gs = gauge_many(body, S[None, :, :] - c[:, None, :])
        scale = np.partition(gs, m - 1, axis=1)[:, m - 1]
        if len(W):
            gw = gauge_many(body, W[None, :, :] - c[:, None, :]).min(axis=1)
            miss = gw > scale + tol(scale)
        else:
            miss = np.ones(len(c), dtype=bool)
        if miss.any():
            k = int(np.argmax(miss))
            wit = Homothet.make(body, c[k], scale[k])
            return HitReport(False, mode, wit, len(wit.covered(S)), checked + k + 1)
        checked += len(c)
    return HitReport(True, mode, checked=checked)
