"""Shared instance factories for the test suite."""
from __future__ import annotations

import random

from treeclust import Clustering, Cut, Dataset, Internal, Leaf, ThresholdTree, tree_evaluate


def random_points(rng: random.Random, n: int, d: int, lo: int = 0, hi: int = 5):
    return tuple(tuple(float(rng.randint(lo, hi)) for _ in range(d)) for _ in range(n))


def random_clustering(
    rng: random.Random, n: int, d: int, k: int, hi: int = 5
) -> Clustering:
    """Random integer points with shuffled round-robin labels (all k present)."""
    pts = random_points(rng, n, d, hi=hi)
    labels = [(i % k) + 1 for i in range(n)]
    rng.shuffle(labels)
    return Clustering(Dataset(pts), tuple(labels), k)


def tree_induced_clustering(
    rng: random.Random, n: int, d: int, k: int, hi: int = 5, tries: int = 50
) -> Clustering | None:
    """Labels induced by a random threshold tree; explainable by construction.
    Retries until every leaf is nonempty, or gives up."""
    for _ in range(tries):
        pts = random_points(rng, n, d, hi=hi)
        ds = Dataset(pts)

        def build(labels: list[int]):
            if len(labels) == 1:
                return Leaf(labels[0])
            split = rng.randint(1, len(labels) - 1)
            cut = Cut(rng.randint(1, d), float(rng.randint(0, hi)))
            return Internal(cut, build(labels[:split]), build(labels[split:]))

        tree = ThresholdTree(build(list(range(1, k + 1))))
        leaves = tree_evaluate(tree, ds)
        if any(not ids for ids in leaves.values()):
            continue
        labels = [0] * n
        for lab, ids in leaves.items():
            for i in ids:
                labels[i] = lab
        return Clustering(ds, tuple(labels), k)
    return None


def mixed_instance(rng: random.Random, n: int, d: int, k: int, hi: int = 5) -> Clustering:
    """Half the time tree-induced (explainable), half the time random labels."""
    if rng.random() < 0.5:
        cl = tree_induced_clustering(rng, n, d, k, hi=hi)
        if cl is not None:
            return cl
    return random_clustering(rng, n, d, k, hi=hi)
