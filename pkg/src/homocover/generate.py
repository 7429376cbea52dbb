"""Seeded instance generators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError

GENERATORS = ("uniform-box", "clusters", "grid", "annulus")


@dataclass
class Instance:
    generator: str
    params: dict
    seed: int
    points: np.ndarray
    labels: np.ndarray | None = None
    body: dict = field(default_factory=lambda: {"kind": "ball", "d": 2})

    def to_dict(self):
        out = {"d": int(self.points.shape[1]), "points": self.points.tolist(),
               "generator": self.generator, "params": self.params, "seed": self.seed}
        if self.labels is not None:
            out["labels"] = self.labels.tolist()
        return out


def uniform_box(n, d=2, seed=0, side=1.0):
    return np.random.default_rng(seed).random((n, d)) * side


def clusters(m, k, spread=0.1, separation=100.0, d=2, seed=0):
    """m groups of k points, each inside a ball of diameter ``spread``.

    Group centers sit on a grid of pitch (separation + 2) * spread, so points of
    different groups are at least separation * spread apart.
    """
    if m < 1 or k < 1 or spread <= 0 or separation <= 0:
        raise GeometryError("clusters needs m, k >= 1 and positive spread and separation")
    rng = np.random.default_rng(seed)
    side = math.ceil(m ** (1.0 / d))
    pitch = (separation + 2) * spread
    idx = np.array(np.unravel_index(np.arange(m), (side,) * d)).T
    centers = idx * pitch
    dirs = rng.normal(size=(m, k, d))
    dirs /= np.linalg.norm(dirs, axis=2, keepdims=True)
    radii = 0.5 * spread * rng.random((m, k, 1)) ** (1.0 / d)
    pts = centers[:, None, :] + dirs * radii
    labels = np.repeat(np.arange(m), k)
    return pts.reshape(m * k, d), labels


def grid(N, d=2, jitter=0.0, seed=0):
    """The lattice {0..N-1}^d, optionally with Gaussian jitter of deviation ``jitter``."""
    axes = [np.arange(N, dtype=float)] * d
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    return perturb(pts, jitter, seed)


def annulus(n, inner=0.5, outer=1.0, seed=0):
    if not 0 <= inner < outer:
        raise GeometryError("annulus needs 0 <= inner < outer")
    rng = np.random.default_rng(seed)
    theta = rng.random(n) * 2 * math.pi
    r = np.sqrt(inner ** 2 + (outer ** 2 - inner ** 2) * rng.random(n))
    return np.c_[r * np.cos(theta), r * np.sin(theta)]


def perturb(S, sigma, seed=0):
    S = np.asarray(S, dtype=float)
    if sigma <= 0:
        return S.copy()
    return S + np.random.default_rng(seed).normal(scale=sigma, size=S.shape)


def gen_instance(generator: str, params: dict | None = None, seed: int = 0) -> Instance:
    params = dict(params or {})
    labels = None
    if generator == "uniform-box":
        pts = uniform_box(int(params.get("n", 100)), int(params.get("d", 2)), seed, float(params.get("side", 1.0)))
    elif generator == "clusters":
        pts, labels = clusters(int(params.get("m", 3)), int(params.get("k", 4)), float(params.get("spread", 0.1)),
                               float(params.get("separation", 100.0)), int(params.get("d", 2)), seed)
    elif generator == "grid":
        pts = grid(int(params.get("N", 10)), int(params.get("d", 2)), float(params.get("jitter", 0.0)), seed)
    elif generator == "annulus":
        pts = annulus(int(params.get("n", 100)), float(params.get("inner", 0.5)), float(params.get("outer", 1.0)), seed)
    else:
        raise GeometryError(f"unknown generator {generator!r}; choose from {', '.join(GENERATORS)}")
    return Instance(generator, params, seed, pts, labels)
