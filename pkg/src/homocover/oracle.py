"""Exhaustive ground truth for small planar instances."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from .cover import Cover, approx_k_ball
from .geometry import AXISBOX, BALL, Ball, ConvexBody, GeometryError, Homothet, gauge_many, tol
from .pack import Packing


class BudgetExceeded(GeometryError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_points: int = 20
    max_candidates: int = 200_000
    time_limit: float = 60.0

    def __post_init__(self):
        if min(self.max_points, self.max_candidates) <= 0 or self.time_limit <= 0:
            raise GeometryError("budget entries must be positive")


class _Clock:
    def __init__(self, budget):
        self.budget = budget
        self.t0 = time.perf_counter()

    def tick(self):
        if time.perf_counter() - self.t0 > self.budget.time_limit:
            raise BudgetExceeded(f"time limit of {self.budget.time_limit}s exceeded")

    def candidates(self, count):
        if count > self.budget.max_candidates:
            raise BudgetExceeded(f"{count} candidates exceed the budget of {self.budget.max_candidates}")


def _planar(S, budget):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[1] != 2:
        raise GeometryError("oracles are planar only")
    if len(S) > budget.max_points:
        raise BudgetExceeded(f"{len(S)} points exceed the budget of {budget.max_points}")
    return S


def circumcircles(A, B, C):
    """Circumcenters and radii of triangles (A[i], B[i], C[i]); NaN for collinear triples."""
    b, c = B - A, C - A
    d = 2 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    bb, cc = (b * b).sum(1), (c * c).sum(1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ux = (c[:, 1] * bb - b[:, 1] * cc) / d
        uy = (b[:, 0] * cc - c[:, 0] * bb) / d
    u = np.stack([ux, uy], axis=1)
    return A + u, np.linalg.norm(u, axis=1)


# ---------------------------------------------------------------- smallest k-enclosing disk

def exact_k_ball(S, k: int, budget: OracleBudget = OracleBudget(max_points=400)) -> Homothet:
    """Smallest disk holding k points: the best over point, diametral and circumscribed candidates."""
    S = _planar(S, budget)
    n = len(S)
    if not 1 <= k <= n:
        raise GeometryError(f"need 1 <= k <= |S| (k={k}, |S|={n})")
    body = Ball(2)
    clock = _Clock(budget)
    upper = approx_k_ball(S, k)
    if k == 1 or upper.scale == 0.0:
        return upper
    U = upper.scale * (1 + 1e-9)
    D = np.linalg.norm(S[:, None] - S[None], axis=2)
    centers, radii = [], []
    I, J = np.nonzero(np.triu(D <= 2 * U, 1))
    centers.append(0.5 * (S[I] + S[J]))
    radii.append(0.5 * D[I, J])
    for i in range(n):
        clock.tick()
        nb = np.flatnonzero(D[i] <= 2 * U)
        nb = nb[nb > i]
        if len(nb) < 2:
            continue
        a, b = np.triu_indices(len(nb), 1)
        j, l = nb[a], nb[b]
        keep = D[j, l] <= 2 * U
        j, l = j[keep], l[keep]
        c, r = circumcircles(np.repeat(S[i][None], len(j), 0), S[j], S[l])
        ok = r <= U
        centers.append(c[ok])
        radii.append(r[ok])
    C = np.vstack(centers)
    R = np.concatenate(radii)
    clock.candidates(len(R))
    order = np.argsort(R, kind="stable")
    C, R = C[order], R[order]
    for s in range(0, len(R), 2048):
        clock.tick()
        cc, rr = C[s:s + 2048], R[s:s + 2048]
        cnt = (np.linalg.norm(S[None] - cc[:, None], axis=2) <= (rr + tol(rr))[:, None]).sum(1)
        hit = np.flatnonzero(cnt >= k)
        if len(hit):
            return Homothet.make(body, cc[hit[0]], rr[hit[0]])
    return upper


# ---------------------------------------------------------------- realizable subsets

def _disk_ranges(S, clock):
    """Subsets S ∩ D over all closed disks D, as bitmasks (general position assumed for ties)."""
    n = len(S)
    sets = {1 << i for i in range(n)}
    if n >= 2:
        sets.add((1 << n) - 1)
    lift = np.c_[S, (S * S).sum(1)]
    any_plane = False
    for tri in itertools.combinations(range(n), 3):
        clock.tick()
        P = lift[list(tri)]
        # plane z = a x + b y + c through the three lifted points
        M = np.c_[P[:, :2], np.ones(3)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        any_plane = True
        coef = np.linalg.solve(M, P[:, 2])
        val = lift[:, 2] - lift[:, :2] @ coef[:2] - coef[2]
        eps = 1e-9 * (1 + np.abs(lift[:, 2]).max())
        below = np.flatnonzero(val < -eps)
        tight = np.flatnonzero(np.abs(val) <= eps)
        base = sum(1 << int(i) for i in below)
        for r in range(len(tight) + 1):
            for sub in itertools.combinations(tight, r):
                sets.add(base | sum(1 << int(i) for i in sub))
    if not any_plane and n >= 3:
        # collinear input: disks cut out exactly the runs along the line
        u = S[-1] - S[0] if np.any(S[-1] != S[0]) else np.array([1.0, 0.0])
        order = np.argsort(S @ u, kind="stable")
        for i in range(n):
            for j in range(i, n):
                sets.add(sum(1 << int(q) for q in order[i:j + 1]))
    sets.discard(0)
    return sets


def realize_disk(S, mask):
    """A disk holding exactly the points of ``mask``: LP with maximal separation margin in the lifted space."""
    n = len(S)
    inside = np.array([(mask >> i) & 1 for i in range(n)], dtype=bool)
    lift = (S * S).sum(1)
    scale = max(1.0, float(np.abs(S).max()))
    # variables a, b, c, delta: lift - a x - b y - c <= -delta inside, >= delta outside
    sgn = np.where(inside, 1.0, -1.0)
    A = np.c_[-sgn[:, None] * S, -sgn, np.ones(n)]
    rhs = -sgn * lift
    res = linprog([0, 0, 0, -1], A_ub=A, b_ub=rhs,
                  bounds=[(None, None)] * 3 + [(None, scale * scale)], method="highs")
    if res.status != 0 or res.x[3] <= 0:
        raise GeometryError("subset is not cut out by a disk")
    a, b, c, _ = res.x
    center = np.array([a / 2, b / 2])
    r2 = c + center @ center
    radius = math.sqrt(max(r2, 0.0))
    h = Homothet.make(Ball(2), center, radius)
    got = h.covered(S)
    if sorted(got.tolist()) != np.flatnonzero(inside).tolist():
        raise GeometryError("realized disk does not reproduce the subset")
    return h


def _square_ranges(P, clock):
    """Subsets S ∩ Q over all closed axis squares Q (coordinates pre-scaled), with a realizing square."""
    n = len(P)
    out = {1 << i: (P[i], 0.0) for i in range(n)}
    for ax in (0, 1):
        oy = 1 - ax
        for i, j in itertools.permutations(range(n), 2):
            if P[j, ax] < P[i, ax] or (P[j, ax] == P[i, ax] and j < i):
                continue
            clock.tick()
            ell = P[j, ax] - P[i, ax]
            if ell <= 0:
                continue
            x0 = P[i, ax]
            inx = (P[:, ax] >= x0 - tol(ell)) & (P[:, ax] <= x0 + ell + tol(ell))
            ev = np.unique(np.r_[P[inx, oy] - ell, P[inx, oy]])
            probes = np.r_[ev, 0.5 * (ev[1:] + ev[:-1])]
            for y0 in probes:
                m = inx & (P[:, oy] >= y0 - tol(ell)) & (P[:, oy] <= y0 + ell + tol(ell))
                mask = sum(1 << int(q) for q in np.flatnonzero(m))
                if mask and mask not in out:
                    c = np.empty(2)
                    c[ax], c[oy] = x0 + ell / 2, y0 + ell / 2
                    out[mask] = (c, ell / 2)
    return out


def _maximal(masks, k):
    small = sorted({m for m in masks if bin(m).count("1") <= k}, key=lambda m: -bin(m).count("1"))
    keep = []
    for m in small:
        if not any(m | q == q for q in keep):
            keep.append(m)
    return keep


def _set_cover(n, sets, k, clock):
    """Minimum number of the bitmask ``sets`` covering all n bits (branch and bound)."""
    full = (1 << n) - 1
    by_point = [[s for s in sets if (s >> p) & 1] for p in range(n)]
    for lst in by_point:
        lst.sort(key=lambda s: -bin(s).count("1"))
    best = [n + 1, None]

    def lower(rem):
        return -(-bin(rem).count("1") // k)

    def rec(covered, chosen):
        clock.tick()
        rem = full & ~covered
        if rem == 0:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        if len(chosen) + lower(rem) >= best[0]:
            return
        p = (rem & -rem).bit_length() - 1
        seen = set()
        for s in by_point[p]:
            gain = s & rem
            if gain in seen:
                continue
            seen.add(gain)
            chosen.append(s)
            rec(covered | s, chosen)
            chosen.pop()

    rec(0, [])
    return best[1]


def exact_min_cover(body: ConvexBody, S, k: int, budget: OracleBudget = OracleBudget()) -> Cover:
    """Minimum cover of S by homothets of a disk or axis box each holding at most k points."""
    S = _planar(S, budget)
    n = len(S)
    if k < 1 or n == 0:
        raise GeometryError("need k >= 1 and a non-empty point set")
    clock = _Clock(budget)
    if body.kind == BALL:
        masks = _disk_ranges(S, clock)
        realize = lambda m: realize_disk(S, m)
    elif body.kind == AXISBOX:
        hw = np.asarray(body.halfwidths)
        table = _square_ranges(S / hw, clock)
        masks = table.keys()
        realize = lambda m: Homothet.make(body, table[m][0] * hw, table[m][1])
    else:
        raise GeometryError("exact covers are available for disks and axis boxes")
    sets = _maximal(masks, k)
    clock.candidates(len(sets))
    chosen = _set_cover(n, sets, k, clock)
    hs, members = [], []
    assignment = np.full(n, -1)
    for m in chosen:
        h = realize(m)
        idx = np.array([i for i in range(n) if (m >> i) & 1])
        assignment[idx[assignment[idx] < 0]] = len(hs)
        hs.append(h)
        members.append(idx)
    return Cover(hs, assignment, members, k, n, [{"candidates": len(sets)}])


# ---------------------------------------------------------------- packings

def _min_disk(P):
    """Smallest enclosing disk of a small point set by candidate enumeration."""
    best = (P[0], 0.0)
    if len(P) == 1:
        return best
    cands = []
    for i, j in itertools.combinations(range(len(P)), 2):
        cands.append((0.5 * (P[i] + P[j]), 0.5 * np.linalg.norm(P[i] - P[j])))
    if len(P) >= 3:
        T = np.array(list(itertools.combinations(range(len(P)), 3)))
        C, R = circumcircles(P[T[:, 0]], P[T[:, 1]], P[T[:, 2]])
        cands.extend((c, r) for c, r in zip(C, R) if np.isfinite(r))
    cands.sort(key=lambda cr: cr[1])
    for c, r in cands:
        if np.all(np.linalg.norm(P - c, axis=1) <= r + tol(r)):
            return c, r
    raise GeometryError("no enclosing disk found")


def _packing_candidates(body, S, k, clock):
    n = len(S)
    out = []
    for T in itertools.combinations(range(n), k):
        clock.tick()
        P = S[list(T)]
        if body.kind == BALL:
            c, r = _min_disk(P)
            out.append((np.asarray(c), float(r)))
        else:
            hw = np.asarray(body.halfwidths)
            Q = P / hw
            lo, hi = Q.min(0), Q.max(0)
            ell = float((hi - lo).max())
            ax = int(np.argmax(hi - lo))
            oy = 1 - ax
            for y0 in {hi[oy] - ell, 0.5 * (lo[oy] + hi[oy] - ell), lo[oy]}:
                c = np.empty(2)
                c[ax], c[oy] = lo[ax] + ell / 2, y0 + ell / 2
                out.append((c * hw, ell / 2))
    return out


def _max_independent(adj_masks, clock):
    """Maximum independent set size and members over bitmask adjacency (min-degree branching)."""
    memo = {}

    def rec(R):
        if R == 0:
            return 0, 0
        if R in memo:
            return memo[R]
        clock.tick()
        bits = []
        r = R
        while r:
            low = r & -r
            bits.append(low.bit_length() - 1)
            r ^= low
        v = min(bits, key=lambda b: bin(adj_masks[b] & R).count("1"))
        best = (-1, 0)
        branch = (adj_masks[v] & R) | (1 << v)
        b = branch
        while b:
            low = b & -b
            u = low.bit_length() - 1
            b ^= low
            size, members = rec(R & ~(adj_masks[u] | (1 << u)))
            if size + 1 > best[0]:
                best = (size + 1, members | (1 << u))
        memo[R] = best
        return best

    n = len(adj_masks)
    return rec((1 << n) - 1)


def exact_max_packing(body: ConvexBody, S, k: int, budget: OracleBudget = OracleBudget(max_points=16)) -> Packing:
    """Largest interior-disjoint family among the canonical minimal k-plus homothets.

    Candidates are the smallest enclosing disk of every k-subset (for boxes, the
    smallest squares slid to both ends and the middle of their free range).
    Candidates containing another candidate are dropped, then a maximum
    independent set of the conflict graph is found exactly; two candidates
    conflict when their interiors overlap or they share a point of S.
    """
    S = _planar(S, budget)
    n = len(S)
    if body.kind not in (BALL, AXISBOX):
        raise GeometryError("exact packings are available for disks and axis boxes")
    if k < 1:
        raise GeometryError("k must be positive")
    clock = _Clock(budget)
    if n < k:
        return Packing([], [], k, n)
    if math.comb(n, k) > budget.max_candidates:
        raise BudgetExceeded(f"C({n},{k}) candidates exceed the budget")
    cands = _packing_candidates(body, S, k, clock)
    C = np.array([c for c, _ in cands])
    R = np.array([r for _, r in cands])
    # drop candidates containing a strictly smaller (or equal, earlier) candidate
    order = np.lexsort((np.arange(len(R)), R))
    C, R = C[order], R[order]
    keep = []
    for i in range(len(R)):
        if keep:
            K = np.array(keep)
            inside = gauge_many(body, C[K] - C[i]) + R[K] <= R[i] + tol(R[i])
            if inside.any():
                continue
        keep.append(i)
    C, R = C[keep], R[keep]
    clock.candidates(len(R))
    inside = gauge_many(body, S[None, :, :] - C[:, None, :]) <= (R + tol(R))[:, None]
    share = (inside.astype(np.int32) @ inside.T.astype(np.int32)) > 0
    adj = []
    for i in range(len(R)):
        # interiors overlap, or a point of S sits on both boundaries
        over = (gauge_many(body, C - C[i]) < R + R[i] - 1e-9) | share[i]
        over[i] = False
        adj.append(sum(1 << int(j) for j in np.flatnonzero(over)))
    size, members = _max_independent(adj, clock)
    chosen = [i for i in range(len(R)) if (members >> i) & 1]
    hs = [Homothet.make(body, C[i], R[i]) for i in chosen]
    return Packing(hs, [h.covered(S) for h in hs], k, n, [{"candidates": len(R)}])


# ---------------------------------------------------------------- graph oracles

def _adj_masks(n, edges):
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def max_matching_bruteforce(n: int, edges) -> int:
    if n > 12:
        raise BudgetExceeded("brute-force matching is limited to 12 vertices")
    adj = _adj_masks(n, edges)

    @lru_cache(maxsize=None)
    def f(mask):
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        best = f(rest)
        nb = adj[v] & rest
        while nb:
            low = nb & -nb
            best = max(best, 1 + f(rest & ~low))
            nb ^= low
        return best

    return f((1 << n) - 1)


def max_independent_bruteforce(n: int, edges) -> int:
    if n > 18:
        raise BudgetExceeded("brute-force independent sets are limited to 18 vertices")
    adj = _adj_masks(n, edges)

    @lru_cache(maxsize=None)
    def f(mask):
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        return max(f(rest), 1 + f(rest & ~adj[v]))

    return f((1 << n) - 1)
