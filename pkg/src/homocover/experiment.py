"""Named experiment suites producing replayable, deterministic reports."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .cover import cover_greedy, cover_net_based, validate_cover
from .delaunay import check_angle_property, cover_pairs, delaunay_graph, matching_of
from .generate import annulus, clusters, grid, uniform_box
from .geometry import AxisBox, Ball, GeometryError, Homothet, hitting_set, homothets_intersect, regular_polygon
from .oracle import exact_max_packing, exact_min_cover
from .pack import pack_greedy, validate_packing
from .weaknet import build_weak_net, verify_hitting
from .zonotope import vertex_in_larger_homothet, zonotope_weak_net

SUITES = ("cover-ratio", "pack-ratio", "net-audit", "delaunay-props", "zonotope-audit", "oracle-compare")


@dataclass
class ExperimentReport:
    suite: str
    trials: int
    seed: int
    records: list = field(default_factory=list)
    timings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r["valid"] for r in self.records)

    def aggregate(self) -> dict:
        out = {}
        ratios = [r["sizeRatio"] for r in self.records if r.get("sizeRatio") is not None]
        if ratios:
            out["sizeRatio"] = {"min": min(ratios), "median": statistics.median(ratios), "max": max(ratios)}
        for key in ("oracleRatio",):
            vals = [r[key] for r in self.records if r.get(key) is not None]
            if vals:
                out[key] = {"min": min(vals), "median": statistics.median(vals), "max": max(vals)}
        return out

    def to_dict(self) -> dict:
        """Everything except wall-clock timings, so equal inputs give identical bytes."""
        return {"suite": self.suite, "trials": self.trials, "seed": self.seed, "passed": self.passed,
                "aggregate": self.aggregate(), "records": self.records}

    def table(self) -> str:
        cols = ["trial", "n", "k", "body", "method", "outputSize", "sizeRatio", "valid"]
        cols = [c for c in cols if any(c in r for r in self.records)]
        rows = [[_fmt(r.get(c)) for c in cols] + [f"{t:.3f}"] for r, t in zip(self.records, self.timings)]
        head = cols + ["wallTime"]
        widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(head)]
        line = lambda cells: "  ".join(c.rjust(w) for c, w in zip(cells, widths))
        out = [line(head), line(["-" * w for w in widths])] + [line(r) for r in rows]
        agg = self.aggregate().get("sizeRatio")
        if agg:
            out.append(f"sizeRatio min {agg['min']:.4f}  median {agg['median']:.4f}  max {agg['max']:.4f}")
        out.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'} ({len(self.records)} records)")
        return "\n".join(out)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.4f}"
    return "" if v is None else str(v)


def _rng(seed, trial):
    return np.random.default_rng([seed, trial])


def _points(gen, rng, n):
    s = int(rng.integers(2**31))
    if gen == "uniform-box":
        return uniform_box(n, 2, s)
    if gen == "annulus":
        return annulus(n, seed=s)
    if gen == "grid":
        N = max(2, int(round(math.sqrt(n))))
        return grid(N, 2, jitter=1e-3, seed=s)
    if gen == "clusters":
        k = max(1, n // 10)
        return clusters(10, k, 0.1, 100.0, 2, s)[0]
    raise GeometryError(gen)


def _bad(S, note):
    return {"valid": False, "problem": note, "instance": np.asarray(S).tolist()}


def _cover_trial(rng, trial, n_max):
    gen = ("uniform-box", "clusters", "grid", "annulus")[trial % 4]
    k = (2, 5, 10, 50)[(trial // 4) % 4]
    S = _points(gen, rng, int(rng.integers(max(k, 50), n_max + 1)))
    n = len(S)
    out = []
    for method, body in (("net", Ball(2)), ("greedy", Ball(2)), ("greedy", AxisBox([1, 1]))):
        rec = {"trial": trial, "generator": gen, "n": n, "k": k, "body": body.kind, "method": method}
        try:
            c = cover_net_based(S, k) if method == "net" else cover_greedy(body, S, k)
            v = validate_cover(c, S)
            rec.update(outputSize=len(c), sizeRatio=c.size_ratio, valid=bool(v))
            if not v:
                rec.update(_bad(S, "; ".join(v.problems)))
        except GeometryError as exc:
            rec.update(outputSize=None, sizeRatio=None, **_bad(S, str(exc)))
        out.append(rec)
    return out


def _pack_trial(rng, trial, n_max):
    gen = ("uniform-box", "clusters", "grid", "annulus")[trial % 4]
    k = (2, 5, 10, 50)[(trial // 4) % 4]
    if gen == "clusters":
        m = int(rng.integers(2, 11))
        S = clusters(m, k, 0.1, 100.0, 2, int(rng.integers(2**31)))[0]
    else:
        S = _points(gen, rng, int(rng.integers(max(k, 50), n_max + 1)))
    out = []
    for body in (Ball(2), AxisBox([1, 1])):
        rec = {"trial": trial, "generator": gen, "n": len(S), "k": k, "body": body.kind, "method": "greedy"}
        try:
            p = pack_greedy(body, S, k)
            v = validate_packing(p, S)
            rec.update(outputSize=len(p), sizeRatio=p.size_ratio, valid=bool(v))
            if not v:
                rec.update(_bad(S, "; ".join(v.problems)))
        except GeometryError as exc:
            rec.update(outputSize=None, sizeRatio=None, **_bad(S, str(exc)))
        out.append(rec)
    return out


def _net_trial(rng, trial, n_max):
    eps = (0.05, 0.1, 0.3)[trial % 3]
    body = (Ball(2), AxisBox([1, 1]))[(trial // 3) % 2]
    S = uniform_box(int(rng.integers(20, n_max + 1)), 2, int(rng.integers(2**31)))
    net = build_weak_net(body, S, eps)
    bound = math.ceil(1 / eps) * len(hitting_set(body, 1 / net.approx_factor))
    audit = verify_hitting(net, body, S, eps, mode="exact")
    rec = {"trial": trial, "n": len(S), "epsilon": eps, "body": body.kind, "method": "greedy-net",
           "outputSize": len(net), "sizeBound": bound, "valid": bool(audit) and len(net) <= bound}
    if not rec["valid"]:
        rec.update(_bad(S, "hitting audit failed" if not audit else "net exceeds size bound"))
    return [rec]


def _delaunay_trial(rng, trial, n_max):
    n = int(rng.integers(10, n_max + 1))
    S = uniform_box(n, 2, int(rng.integers(2**31)))
    g = delaunay_graph(Ball(2), S)
    ang = check_angle_property(Ball(2), S, graph=g)
    M = matching_of(g)
    cp = cover_pairs(Ball(2), S, g)
    ok = ang.ok and len(M) == n // 2 and len(cp) == math.ceil(n / 2) and bool(validate_cover(cp, S)) and M.certified
    rec = {"trial": trial, "n": n, "k": 2, "body": "ball", "method": "delaunay-matching", "outputSize": len(cp),
           "sizeRatio": cp.size_ratio, "matching": len(M), "worstAngleSum": ang.worst, "valid": ok}
    if not ok:
        rec.update(_bad(S, "Delaunay property failed"))
    return [rec]


def _zonotope_trial(rng, trial, n_max):
    Z = (regular_polygon(4, math.sqrt(2), math.pi / 4), regular_polygon(6), regular_polygon(8))[trial % 3]
    v = len(Z.verts)
    misses = 0
    for _ in range(200):
        c1 = rng.normal(size=2)
        s1 = float(rng.random()) * 2 + 1e-3
        s2 = float(rng.random()) * s1
        h1 = Homothet.make(Z, c1, s1)
        h2 = Homothet.make(Z, c1 + rng.normal(size=2) * 2, s2)
        if homothets_intersect(h1, h2) and vertex_in_larger_homothet(Z, h1, h2) is None:
            misses += 1
    eps = (0.1, 0.2, 0.5)[(trial // 3) % 3]
    S = uniform_box(int(rng.integers(20, n_max + 1)), 2, int(rng.integers(2**31)))
    net = zonotope_weak_net(Z, S, eps)
    audit = verify_hitting(net, Z, S, eps, mode="random", samples=5000, seed=trial)
    ok = misses == 0 and len(net) <= v / eps + 1e-9 and bool(audit)
    rec = {"trial": trial, "n": len(S), "epsilon": eps, "body": f"zonotope-{v}", "method": "vertex-net",
           "outputSize": len(net), "sizeBound": v / eps, "vertexMisses": misses, "valid": ok}
    if not ok:
        rec.update(_bad(S, "zonotope audit failed"))
    return [rec]


def _oracle_trial(rng, trial, n_max):
    k = 4
    S = uniform_box(int(rng.integers(k, n_max + 1)), 2, int(rng.integers(2**31)))
    out = []
    for body in (Ball(2), AxisBox([1, 1])):
        ex = exact_min_cover(body, S, k)
        gr = cover_greedy(body, S, k)
        ep = exact_max_packing(body, S, k)
        pg = pack_greedy(body, S, k)
        cr = len(gr) / len(ex)
        ok = cr <= 4 and 4 * len(pg) >= len(ep) and bool(validate_cover(ex, S)) and bool(validate_packing(ep, S))
        rec = {"trial": trial, "n": len(S), "k": k, "body": body.kind, "method": "greedy-vs-exact",
               "outputSize": len(gr), "exactCover": len(ex), "oracleRatio": cr, "packing": len(pg),
               "exactPacking": len(ep), "packRatio": (len(pg) / len(ep)) if len(ep) else None, "valid": ok}
        if not ok:
            rec.update(_bad(S, "oracle comparison failed"))
        out.append(rec)
    return out


_TRIALS = {"cover-ratio": (_cover_trial, 1000), "pack-ratio": (_pack_trial, 1000),
           "net-audit": (_net_trial, 200), "delaunay-props": (_delaunay_trial, 200),
           "zonotope-audit": (_zonotope_trial, 150), "oracle-compare": (_oracle_trial, 16)}


def run_experiment(suite: str, trials: int = 20, seed: int = 0, n_max: int | None = None) -> ExperimentReport:
    if suite not in _TRIALS:
        raise GeometryError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    fn, default_n = _TRIALS[suite]
    report = ExperimentReport(suite, trials, seed)
    for t in range(trials):
        t0 = time.perf_counter()
        recs = fn(_rng(seed, t), t, n_max or default_n)
        dt = time.perf_counter() - t0
        report.records.extend(recs)
        report.timings.extend([dt / len(recs)] * len(recs))
    return report
