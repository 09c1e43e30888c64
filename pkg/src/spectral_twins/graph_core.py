"""Weighted graphs, generalized Laplacians and the 7_1 isospectral pair.

Vertex ids are 0-based here. The CLI and the graph file format use 1-based
ids and convert at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    BadVertexId,
    DuplicateEdge,
    GraphError,
    LoopEdge,
    NonPositiveWeight,
    NotGeneralizedLaplacian,
    NotThreeColored,
    TooManyLabels,
)

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class WeightedGraph:
    """Simple loop-free graph with positive edge weights and vertex potentials.

    Use :func:`build_graph` to construct one; it validates the edge list.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    potentials: tuple[float, ...]

    @property
    def V(self) -> int:
        return self.vertex_count

    @property
    def E(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency_list(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v, _ in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(n)) for n in nbrs)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.vertex_count
        comps = []
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            seen[start] = True
            comp, stack = [start], [start]
            while stack:
                u = stack.pop()
                for w in self.adjacency_list[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def C(self) -> int:
        return len(self.components)

    @property
    def l(self) -> int:
        """Number of independent cycles, ``E - V + C``."""
        return self.E - self.V + self.C

    def degree(self, v: int) -> int:
        return len(self.adjacency_list[v])

    def weight(self, u: int, v: int) -> float:
        return self._weight_map.get(frozenset((u, v)), 0.0)

    @cached_property
    def _weight_map(self) -> dict[frozenset, float]:
        return {frozenset((u, v)): w for u, v, w in self.edges}

    def is_connected(self) -> bool:
        return self.C == 1


def build_graph(vertex_count: int, edge_list, potentials=None) -> WeightedGraph:
    """Validate an edge list and return a :class:`WeightedGraph`.

    ``edge_list`` holds ``(u, v, w)`` triples with 0-based ids. ``potentials``
    defaults to all zeros.
    """
    vertex_count = int(vertex_count)
    if vertex_count < 1:
        raise BadVertexId(f"vertex_count must be positive, got {vertex_count}")
    edges: list[Edge] = []
    seen: set[frozenset] = set()
    for idx, item in enumerate(edge_list):
        u, v, w = item
        if int(u) != u or int(v) != v:
            raise BadVertexId(f"edge {idx}: non-integer vertex id in {item!r}")
        u, v, w = int(u), int(v), float(w)
        for x in (u, v):
            if not 0 <= x < vertex_count:
                raise BadVertexId(f"edge {idx}: vertex {x} outside 0..{vertex_count - 1}")
        if u == v:
            raise LoopEdge(f"edge {idx}: loop at vertex {u}")
        if not (w > 0 and np.isfinite(w)):
            raise NonPositiveWeight(f"edge {idx}: weight {w} is not a positive real")
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {idx}: duplicate edge between {u} and {v}")
        seen.add(key)
        edges.append((u, v, w))
    if potentials is None:
        pots = (0.0,) * vertex_count
    else:
        pots = tuple(float(p) for p in potentials)
        if len(pots) != vertex_count:
            raise BadVertexId(f"expected {vertex_count} potentials, got {len(pots)}")
    return WeightedGraph(vertex_count, tuple(edges), pots)


@dataclass(frozen=True, eq=False)
class GeneralizedLaplacian:
    """Real symmetric matrix whose off-diagonal entries are ``<= 0``.

    ``graph`` is the weighted graph the matrix was built from, when known.
    """

    entries: np.ndarray
    graph: WeightedGraph | None = field(default=None, repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @classmethod
    def from_matrix(cls, m, graph: WeightedGraph | None = None) -> "GeneralizedLaplacian":
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotGeneralizedLaplacian(f"matrix must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise NotGeneralizedLaplacian("matrix is not symmetric")
        off = m - np.diag(np.diag(m))
        if np.any(off > 0):
            raise NotGeneralizedLaplacian("positive off-diagonal entry")
        return cls(m, graph)


def _graph_matrix(g: WeightedGraph, diagonal) -> np.ndarray:
    m = np.zeros((g.V, g.V))
    for u, v, w in g.edges:
        m[u, v] = m[v, u] = -w
    m[np.diag_indices(g.V)] = diagonal
    return m


def laplacian(g: WeightedGraph) -> GeneralizedLaplacian:
    """``-w_ij`` on edges, the vertex potentials on the diagonal."""
    return GeneralizedLaplacian(_graph_matrix(g, g.potentials), g)


def combinatorial_laplacian(g: WeightedGraph, row_sum_zero: bool = False) -> GeneralizedLaplacian:
    """Laplacian with potentials ``P_i = -sum_j w_ij`` and off-diagonals ``-w_ij``.

    With these signs every row of the matrix sums to ``-2 sum_j w_ij``. Pass
    ``row_sum_zero=True`` for the usual ``D - W`` matrix whose rows sum to zero.
    """
    strength = np.zeros(g.V)
    for u, v, w in g.edges:
        strength[u] += w
        strength[v] += w
    pots = strength if row_sum_zero else -strength
    return GeneralizedLaplacian(_graph_matrix(g, pots), build_graph(g.V, g.edges, pots))


def line_graph(parent: WeightedGraph, weights: Sequence[float]) -> WeightedGraph:
    """Line graph of a 3-edge-coloured parent with the complementary weight rule.

    The parent's edge weights are its colour labels and must each be one of
    the three distinct values in ``weights``. Line vertex ``i`` is parent edge
    ``i``. Two line vertices are joined when their parent edges share a vertex,
    with weight equal to the label carried by neither of them.
    """
    if parent.E == 0:
        raise GraphError("parent graph has no edges")
    labels = tuple(float(w) for w in weights)
    if len(labels) != 3 or len(set(labels)) != 3:
        raise TooManyLabels(f"need exactly three distinct labels, got {weights!r}")
    for idx, (_, _, w) in enumerate(parent.edges):
        if w not in labels:
            raise TooManyLabels(f"parent edge {idx} has label {w} outside {labels}")

    incident: list[list[int]] = [[] for _ in range(parent.V)]
    for idx, (u, v, _) in enumerate(parent.edges):
        incident[u].append(idx)
        incident[v].append(idx)

    line_edges = []
    for vertex, eids in enumerate(incident):
        for e, f in combinations(eids, 2):
            we, wf = parent.edges[e][2], parent.edges[f][2]
            if we == wf:
                raise NotThreeColored(
                    f"parent edges {e} and {f} share vertex {vertex} and label {we}"
                )
            (third,) = set(labels) - {we, wf}
            line_edges.append((e, f, third))
    return build_graph(parent.E, line_edges)


# Interior triangle on vertices 3, 4, 5 (1-based labels 4, 5, 6); each boundary
# vertex 0, 1, 2 hangs off one interior vertex.
_EDGES_7_1 = ((0, 3, "c"), (1, 4, "a"), (2, 5, "b"), (3, 4, "c"), (3, 5, "b"), (4, 5, "a"))

TRANSPLANTATION_7_1 = np.array(
    [
        [0, -1, 0, 0, 0, 1],
        [-1, 0, 0, 0, 1, 0],
        [0, 0, -1, 1, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 1, 0, 0, 0, 1],
        [1, 0, 0, 0, 1, 0],
    ],
    dtype=int,
)
TRANSPLANTATION_7_1.setflags(write=False)

BOUNDARY_7_1 = (0, 1, 2)
INTERIOR_7_1 = (3, 4, 5)


class Pair71(NamedTuple):
    g1: WeightedGraph
    g2: WeightedGraph
    T: np.ndarray
    boundary: tuple[int, ...] = BOUNDARY_7_1
    interior: tuple[int, ...] = INTERIOR_7_1


def graph_7_1(a: float, b: float, c: float, variant: int = 1) -> WeightedGraph:
    """One graph of the 7_1 pair; variant 2 swaps ``b`` and ``c``."""
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    for name, x in zip("abc", (a, b, c)):
        if not x > 0:
            raise NonPositiveWeight(f"weight {name}={x} must be positive")
    vals = {"a": a, "b": b, "c": c} if variant == 1 else {"a": a, "b": c, "c": b}
    return build_graph(6, [(u, v, vals[s]) for u, v, s in _EDGES_7_1])


def builtin_7_1(a: float, b: float, c: float) -> Pair71:
    return Pair71(graph_7_1(a, b, c, 1), graph_7_1(a, b, c, 2), TRANSPLANTATION_7_1)


@dataclass(frozen=True, eq=False)
class PolynomialMap:
    matrix: np.ndarray
    valid: bool
    graph: WeightedGraph | None

    @property
    def laplacian(self) -> GeneralizedLaplacian | None:
        if self.graph is None:
            return None
        return GeneralizedLaplacian(self.matrix, self.graph)


def polynomial_apply(L, coeffs: Sequence[float], zero_tol: float = 1e-12) -> PolynomialMap:
    """Evaluate ``P(L) = sum_k coeffs[k] L^k`` by Horner's rule.

    The result is flagged valid when every off-diagonal entry is ``<= 0``;
    entries below ``zero_tol * max|P(L)|`` are treated as exact zeros
    (cancellation noise) and cleared in the returned matrix.
    """
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise ValueError("coeffs must be nonempty")
    m = np.asarray(L, dtype=float)
    n = m.shape[0]
    eye = np.eye(n)
    out = coeffs[-1] * eye
    for ck in reversed(coeffs[:-1]):
        out = out @ m + ck * eye
    out = 0.5 * (out + out.T)
    scale = max(np.abs(out).max(), 1.0)
    off = out - np.diag(np.diag(out))
    out[(np.abs(off) <= zero_tol * scale) & ~np.eye(n, dtype=bool)] = 0.0
    off = out - np.diag(np.diag(out))
    valid = not np.any(off > 0)
    graph = None
    if valid:
        iu, ju = np.nonzero(np.triu(off, 1))
        graph = build_graph(n, [(i, j, -out[i, j]) for i, j in zip(iu, ju)], np.diag(out))
    out.setflags(write=False)
    return PolynomialMap(out, valid, graph)
