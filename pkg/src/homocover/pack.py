"""Greedy packings of k-plus homothets (each holding at least k points) with disjoint interiors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cover import Validity
from .geometry import ConvexBody, DegenerateInputError, GaugeIndex, GeometryError, Homothet, gauge_many, intersect_mask


@dataclass
class Packing:
    homothets: list
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
                "members": [[int(i) for i in m] for m in self.members],
                "valid": bool(valid) if valid is not None else None,
                "sizeRatio": self.size_ratio}


def validate_packing(packing: Packing, S, k=None, margin: float = 1e-9) -> Validity:
    """Recount members and check pairwise gauge separation c_i - c_j against s_i + s_j."""
    S = np.asarray(S, dtype=float)
    k = packing.k if k is None else k
    problems = []
    hs = packing.homothets
    for i, h in enumerate(hs):
        cnt = len(h.covered(S))
        if cnt < k:
            problems.append(f"homothet {i} holds {cnt} < {k} points")
    if hs:
        body = hs[0].body
        if not body.symmetric:
            problems.append("disjointness certificate needs a centrally symmetric body")
        else:
            C = np.array([h.center for h in hs])
            s = np.array([h.scale for h in hs])
            for i in range(len(hs)):
                g = gauge_many(body, C[i + 1:] - C[i])
                bad = np.flatnonzero(g < s[i] + s[i + 1:] - margin)
                if len(bad):
                    problems.append(f"homothets {i} and {i + 1 + int(bad[0])} overlap")
                    break
    if len(hs) > len(S) // k:
        problems.append("more homothets than floor(n/k)")
    return Validity(not problems, problems)


def pack_greedy(body: ConvexBody, S, k: int, strict: bool = True) -> Packing:
    """Smallest-first greedy over the k-point homothets centered at the input points.

    Every selected homothet eliminates all candidates it touches (closed
    intersection), so the output interiors are disjoint.  A candidate holding
    3k/2 or more points signals a boundary tie; ``strict`` turns it into an error.
    """
    S = np.asarray(S, dtype=float)
    if not body.symmetric:
        raise GeometryError("greedy packing needs a centrally symmetric body")
    if S.ndim != 2 or S.shape[1] != body.d:
        raise GeometryError("dimension mismatch between body and points")
    if k < 1:
        raise GeometryError("k must be positive")
    if len(S) < k:
        raise GeometryError(f"need |S| >= k (|S|={len(S)}, k={k})")
    index = GaugeIndex(body, S)
    scales = index.kth(S, k)
    counts = index.count_within(S, scales)
    heavy = np.flatnonzero(counts >= 1.5 * k) if k > 1 else np.zeros(0, dtype=int)
    if strict and len(heavy):
        p = int(heavy[0])
        raise DegenerateInputError(
            f"the {k}-point homothet at point {p} (scale {scales[p]:.12g}) holds {int(counts[p])} "
            f">= 3k/2 points because of boundary ties")
    alive = np.ones(len(S), dtype=bool)
    hs, members, trace = [], [], []
    for p in np.argsort(scales, kind="stable"):
        if not alive[p]:
            continue
        hs.append(Homothet.make(body, S[p], scales[p]))
        members.append(index.within(S[p], scales[p]))
        idx = np.flatnonzero(alive)
        hit = idx[intersect_mask(body, S[p], scales[p], S[idx], scales[idx])]
        alive[hit] = False
        trace.append({"center": int(p), "removed": len(hit)})
    return Packing(hs, members, k, len(S), trace)
