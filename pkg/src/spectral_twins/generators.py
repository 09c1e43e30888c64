"""Small graph families with random positive weights."""

from __future__ import annotations

import numpy as np

from .graph_core import WeightedGraph, build_graph


def _weights(rng, n, low, high):
    return rng.uniform(low, high, size=n)


def random_tree(n: int, rng: np.random.Generator, low=0.1, high=10.0) -> WeightedGraph:
    """Random recursive tree on shuffled vertex labels."""
    parents = [int(rng.integers(0, v)) for v in range(1, n)]
    order = rng.permutation(n)
    w = _weights(rng, n - 1, low, high)
    return build_graph(n, [(int(order[p]), int(order[v]), w[v - 1]) for v, p in enumerate(parents, start=1)])


def complete_graph(n: int, rng: np.random.Generator, low=0.1, high=10.0) -> WeightedGraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    w = _weights(rng, len(pairs), low, high)
    return build_graph(n, [(i, j, x) for (i, j), x in zip(pairs, w)])


def cycle_graph(n: int, rng: np.random.Generator, low=0.1, high=10.0) -> WeightedGraph:
    w = _weights(rng, n, low, high)
    return build_graph(n, [(i, (i + 1) % n, w[i]) for i in range(n)])


def path_graph(n: int, weight: float = 1.0) -> WeightedGraph:
    return build_graph(n, [(i, i + 1, weight) for i in range(n - 1)])


def star_graph(leaves: int, weights=None) -> WeightedGraph:
    """Centre vertex 0 joined to ``leaves`` pendant vertices."""
    weights = [1.0] * leaves if weights is None else list(weights)
    return build_graph(leaves + 1, [(0, i + 1, w) for i, w in enumerate(weights)])
