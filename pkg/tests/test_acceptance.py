"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line with its runtime.

Run alone with ``pytest tests/test_acceptance.py -v -s``; the lines are also
collected into the terminal summary of a normal run.
"""

import json
import math
import statistics
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from homocover.cover import approx_k_ball, cover_greedy, cover_net_based, validate_cover
from homocover.delaunay import (check_angle_property, cover_pairs, delaunay_graph, independent_set_bound,
                                matching_cover_bound, matching_of)
from homocover.generate import annulus, clusters, grid, uniform_box
from homocover.geometry import AxisBox, Ball, Homothet, SymPolygon, hitting_set, homothets_intersect, regular_polygon
from homocover.matching import max_matching
from homocover.oracle import (exact_k_ball, exact_max_packing, exact_min_cover, max_independent_bruteforce,
                              max_matching_bruteforce)
from homocover.pack import pack_greedy, validate_packing
from homocover.weaknet import build_weak_net, verify_hitting
from homocover.zonotope import vertex_in_larger_homothet, zonotope_weak_net

BASELINES = Path(__file__).with_name("baselines.json")
DISK, SQUARE = Ball(2), AxisBox([1, 1])
GENERATORS = ("uniform-box", "clusters", "grid", "annulus")


def report(number, ok, detail, started, limit=None):
    elapsed = time.perf_counter() - started
    timing = f"{elapsed:.1f}s" + (f" (limit {limit:g}s)" if limit else "")
    within = limit is None or elapsed < limit
    line = f"criterion {number}: {'PASS' if ok and within else 'FAIL'}  {detail}  [{timing}]"
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)
    assert ok, detail
    assert within, f"runtime {elapsed:.1f}s exceeds {limit}s"


def points(gen, n, k, rng):
    seed = int(rng.integers(2**31))
    if gen == "uniform-box":
        return uniform_box(n, 2, seed)
    if gen == "annulus":
        return annulus(n, seed=seed)
    if gen == "grid":
        return grid(max(2, math.ceil(math.sqrt(n))), 2, jitter=1e-3, seed=seed)
    return clusters(max(1, n // k), k, 0.1, 100.0, 2, seed)[0]


def test_criterion_01_pigeonhole_sandwich():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    bad, low, high = [], 0, 0
    for trial in range(1000):
        gen = GENERATORS[trial % 4]
        k = (2, 5, 10, 50)[(trial // 4) % 4]
        body = (DISK, SQUARE)[(trial // 16) % 2]
        S = points(gen, int(rng.integers(k, 200)), k, rng)
        n = len(S)
        c = cover_net_based(S, k) if (body is DISK and trial % 3 == 0) else cover_greedy(body, S, k)
        p = pack_greedy(body, S, k)
        low += len(c) == math.ceil(n / k)
        high += len(p) == n // k
        if len(c) < math.ceil(n / k) or len(p) > n // k:
            bad.append(trial)
    report(1, not bad, f"1000 instances, {len(bad)} violations (covers at ceil(n/k): {low}, packings at floor(n/k): {high})",
           t0, 60)


def test_criterion_02_approx_k_ball_ratio():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst, bad = 0.0, 0
    for _ in range(500):
        n = int(rng.integers(2, 101))
        k = int(rng.integers(2, n + 1))
        S = rng.random((n, 2))
        r_opt = exact_k_ball(S, k).scale
        r = approx_k_ball(S, k).scale
        if r > 2 * r_opt + 1e-7 or r < r_opt - 1e-7:
            bad += 1
        if r_opt > 0:
            worst = max(worst, r / r_opt)
    report(2, bad == 0, f"500 instances, max approx/exact radius {worst:.4f}, {bad} above 2", t0, 60)


def test_criterion_03_validity_certificates():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    runs, failures = 0, []
    for gen in GENERATORS:
        for k in (2, 5, 10, 50):
            for n in (int(rng.integers(max(k, 50), 1000)), 5000):
                S = points(gen, n, k, rng)
                jobs = [("net-disk", lambda: cover_net_based(S, k)),
                        ("greedy-disk", lambda: cover_greedy(DISK, S, k)),
                        ("greedy-square", lambda: cover_greedy(SQUARE, S, k))]
                if n < 5000 or k >= 5:
                    jobs.append(("greedy-hexagon", lambda: cover_greedy(regular_polygon(6), S, k)))
                for name, job in jobs:
                    runs += 1
                    if not validate_cover(job(), S):
                        failures.append((gen, k, n, name))
                for body in (DISK, SQUARE):
                    runs += 1
                    if not validate_packing(pack_greedy(body, S, k), S):
                        failures.append((gen, k, n, f"pack-{body.kind}"))
    report(3, not failures, f"{runs} cover/packing runs up to n=5000, {len(failures)} failed certificates", t0, 300)


def test_criterion_04_clusters():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    bad = []
    for trial in range(20):
        m, k = int(rng.integers(2, 11)), (2, 4, 5, 10)[trial % 4]
        S, _ = clusters(m, k, 0.1, 100.0, 2, int(rng.integers(2**31)))
        for body in (DISK, SQUARE):
            if len(pack_greedy(body, S, k)) != m:
                bad.append((trial, "pack", body.kind))
            covers = [cover_greedy(body, S, k)] + ([cover_net_based(S, k)] if body is DISK else [])
            for c in covers:
                if not (m <= len(c) <= 2 * m and validate_cover(c, S)):
                    bad.append((trial, "cover", body.kind, len(c), m))
    report(4, not bad, f"20 cluster instances, packing == m and cover in [m, 2m]; {len(bad)} misses", t0, 10)


def test_criterion_05_weak_net_hitting():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    bad_hit, bad_size = 0, 0
    for trial in range(200):
        body = (DISK, SQUARE)[trial % 2]
        eps = (0.05, 0.1, 0.3)[(trial // 2) % 3]
        S = rng.random((int(rng.integers(10, 201)), 2))
        net = build_weak_net(body, S, eps)
        bad_hit += not verify_hitting(net, body, S, eps, mode="exact")
        bad_size += len(net) > math.ceil(1 / eps) * len(hitting_set(body, 1 / net.approx_factor))
    report(5, bad_hit == 0 and bad_size == 0,
           f"200 instances, {bad_hit} exact-audit failures, {bad_size} size-bound violations", t0, 120)


def test_criterion_06_zonotope_vertex_property():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    square = SymPolygon([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    failures = {}
    for name, Z in (("square", square), ("hexagon", regular_polygon(6)), ("octagon", regular_polygon(8))):
        found = misses = 0
        while found < 10_000:
            s1 = float(rng.random()) * 2 + 1e-3
            s2 = float(rng.random()) * s1
            c1 = rng.normal(size=2)
            c2 = c1 + rng.normal(size=2) * (s1 + s2) * 0.6
            h1, h2 = Homothet.make(Z, c1, s1), Homothet.make(Z, c2, s2)
            if not homothets_intersect(h1, h2):
                continue
            found += 1
            misses += vertex_in_larger_homothet(Z, h1, h2) is None
        failures[name] = misses
    report(6, not any(failures.values()), f"3 x 10^4 intersecting pairs, witness failures {failures}", t0, 30)


def test_criterion_07_zonotope_net_size():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    square = SymPolygon([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    bad, fill = 0, 0.0
    for trial in range(100):
        Z = (square, regular_polygon(6))[trial % 2]
        eps = (0.1, 0.2, 0.25, 0.5)[(trial // 2) % 4]
        S = rng.random((int(rng.integers(20, 201)), 2))
        net = zonotope_weak_net(Z, S, eps)
        bound = len(Z.verts) / eps
        bad += len(net) > bound + 1e-9
        fill = max(fill, len(net) / bound)
    report(7, bad == 0, f"100 instances, {bad} nets above v/eps (largest size/bound {fill:.3f})", t0, 60)


def test_criterion_08_delaunay_angles():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    violations, worst = 0, 0.0
    for _ in range(100):
        S = rng.random((100, 2))
        rep = check_angle_property(DISK, S, alpha=1.0)
        violations += len(rep.violations)
        worst = max(worst, math.degrees(rep.worst))
    report(8, violations == 0, f"100 triangulations, {violations} violations, worst opposite-angle sum {worst:.3f} deg",
           t0, 60)


def test_criterion_09_disk_matching():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    bad = 0
    for _ in range(100):
        n = int(rng.integers(2, 201))
        S = rng.random((n, 2))
        g = delaunay_graph(DISK, S)
        bad += len(matching_of(g)) != n // 2
        c = cover_pairs(DISK, S, g)
        bad += len(c) != math.ceil(n / 2) or not validate_cover(c, S)
    report(9, bad == 0, f"100 instances, {bad} matching or pair-cover mismatches", t0, 120)


def test_criterion_10_matching_engine():
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    bad = 0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        p = float(rng.random())
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        bad += len(max_matching(n, edges)) != max_matching_bruteforce(n, edges)
    report(10, bad == 0, f"500 random graphs, {bad} disagreements with brute force", t0, 60)


def test_criterion_11_independent_set_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    fails = []
    for _ in range(100):
        n = int(rng.integers(3, 19))
        S = rng.random((n, 2))
        alpha = max_independent_bruteforce(n, delaunay_graph(DISK, S).edges)
        if not alpha < independent_set_bound(n, 1.0) + 1e-9:
            fails.append((n, alpha))
    by_n = {}
    for n, a in fails:
        by_n[n] = by_n.get(n, 0) + 1
    report(11, not fails, f"100 instances, {len(fails)} with independence number >= n/2 - 1/2 (failures by n: {by_n})",
           t0, 120)


def test_criterion_12_oracle_compare():
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    k, bad = 4, 0
    cover_ratio, pack_ratio = 0.0, math.inf
    for trial in range(200):
        body = (DISK, SQUARE)[trial % 2]
        S = rng.random((int(rng.integers(k, 17)), 2))
        ex, gr = exact_min_cover(body, S, k), cover_greedy(body, S, k)
        ep, pg = exact_max_packing(body, S, k), pack_greedy(body, S, k)
        cover_ratio = max(cover_ratio, len(gr) / len(ex))
        if len(ep):
            pack_ratio = min(pack_ratio, len(pg) / len(ep))
        bad += len(gr) > 4 * len(ex) or 4 * len(pg) < len(ep)
    report(12, bad == 0, f"200 instances, max greedy/exact cover {cover_ratio:.3f}, min greedy/exact packing "
                         f"{pack_ratio:.3f}, {bad} outside factor 4", t0, 300)


def test_criterion_13_polygon_pair_cover():
    t0 = time.perf_counter()
    rng = np.random.default_rng(13)
    bad, slack = 0, math.inf
    for trial in range(50):
        body = regular_polygon((12, 16, 20, 24, 32)[trial % 5], rotation=float(rng.random()))
        n = int(rng.integers(20, 61))
        S = rng.random((n, 2))
        c = cover_pairs(body, S)
        bad += len(c) > matching_cover_bound(n) or not validate_cover(c, S)
        slack = min(slack, matching_cover_bound(n) - len(c))
    report(13, bad == 0, f"50 instances, {bad} pair covers above n - ceil((n-8)/3) (smallest slack {slack})", t0, 120)


def _baseline_workload():
    cover, pack = [], []
    for seed in range(6):
        for k in (5, 10, 20):
            S = uniform_box(2000, 2, 100 + seed)
            cover.append(cover_net_based(S, k).size_ratio)
            cover.append(cover_greedy(DISK, S, k).size_ratio)
            pack.append(pack_greedy(DISK, S, k).size_ratio)
    return {"coverSizeRatioMedian": statistics.median(cover), "packSizeRatioMedian": statistics.median(pack)}


def test_criterion_14_regression_baselines():
    t0 = time.perf_counter()
    now = _baseline_workload()
    if not BASELINES.exists():
        BASELINES.write_text(json.dumps(now, indent=1, sort_keys=True) + "\n")
        report(14, True, f"baselines established {now}", t0)
        return
    frozen = json.loads(BASELINES.read_text())
    drift = {key: now[key] / frozen[key] - 1 for key in frozen}
    ok = all(abs(v) <= 0.10 for v in drift.values())
    shown = ", ".join(f"{key} {now[key]:.4f} (frozen {frozen[key]:.4f})" for key in sorted(frozen))
    report(14, ok, shown, t0)
