"""Seeded instance generators for tests and benchmarks.

All randomness flows through an explicit seed; identical calls produce
identical instances.
"""
from __future__ import annotations

import random

from .core import Dataset
from .explanation import Clustering


def gen_separated(
    k: int, per_cluster: int, dim: int, separation: float, seed: int
) -> Clustering:
    """k axis-aligned unit boxes spread along dimension 1 with gaps of at
    least `separation`; always explainable by k-1 cuts on dimension 1."""
    if k < 1 or per_cluster < 1 or dim < 1:
        raise ValueError("sizes must be positive")
    if separation < 0:
        raise ValueError("separation must be nonnegative")
    rng = random.Random(seed)
    pts: list[tuple[float, ...]] = []
    labels: list[int] = []
    for j in range(k):
        offset = j * (1.0 + separation)
        for _ in range(per_cluster):
            first = offset + rng.random()
            rest = [rng.random() for _ in range(dim - 1)]
            pts.append((first, *rest))
            labels.append(j + 1)
    return Clustering(Dataset(tuple(pts)), tuple(labels), k)


def gen_xor(per_cluster: int, dim: int, seed: int) -> Clustering:
    """Two interleaved clusters on the diagonal corners of the unit square
    (cluster 1 near (0,0)/(1,1), cluster 2 near (0,1)/(1,0)); extra
    dimensions are uniform noise. per_cluster=2 gives the exact 4-corner
    pattern, which no single cut can explain."""
    if per_cluster < 2:
        raise ValueError("xor needs at least 2 points per cluster")
    if dim < 2:
        raise ValueError("xor needs dimension >= 2")
    rng = random.Random(seed)
    corners = {1: [(0.0, 0.0), (1.0, 1.0)], 2: [(0.0, 1.0), (1.0, 0.0)]}
    exact = per_cluster == 2 and dim == 2
    pts: list[tuple[float, ...]] = []
    labels: list[int] = []
    for label in (1, 2):
        for i in range(per_cluster):
            cx, cy = corners[label][i % 2]
            if exact:
                x, y = cx, cy
            else:
                x = cx + rng.uniform(-0.1, 0.1)
                y = cy + rng.uniform(-0.1, 0.1)
            rest = [rng.random() for _ in range(dim - 2)]
            pts.append((x, y, *rest))
            labels.append(label)
    return Clustering(Dataset(tuple(pts)), tuple(labels), 2)


def gen_uniform(k: int, per_cluster: int, dim: int, seed: int) -> Clustering:
    """Uniform points in the unit cube with shuffled round-robin labels, so
    every label in 1..k occurs."""
    if k < 1 or per_cluster < 1 or dim < 1:
        raise ValueError("sizes must be positive")
    rng = random.Random(seed)
    n = k * per_cluster
    pts = [tuple(rng.random() for _ in range(dim)) for _ in range(n)]
    labels = [(i % k) + 1 for i in range(n)]
    rng.shuffle(labels)
    return Clustering(Dataset(tuple(pts)), tuple(labels), k)
