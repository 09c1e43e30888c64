"""Nodal domain counting on discrete graphs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, ZeroEigenvalue, ZeroEntry
from .graph_core import WeightedGraph, laplacian
from .spectra import SpectralDecomposition, eig_sym

STRONG = "strong"
WEAK = "weak"
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class SignPattern:
    signs: tuple[int, ...]
    zero_tol: float

    @property
    def zeros(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == 0)


def sign_pattern(phi, zero_tol: float = ZERO_TOL) -> SignPattern:
    """Classify entries as +1/-1, or 0 when ``|phi(v)| <= zero_tol * max|phi|``."""
    phi = np.asarray(phi, dtype=float)
    cut = zero_tol * (np.abs(phi).max() if phi.size else 0.0)
    signs = np.where(np.abs(phi) <= cut, 0, np.sign(phi)).astype(int)
    return SignPattern(tuple(int(s) for s in signs), zero_tol)


def _components(g: WeightedGraph, members: set[int]) -> list[list[int]]:
    comps = []
    left = set(members)
    while left:
        start = min(left)
        left.discard(start)
        comp, queue = [start], [start]
        while queue:
            u = queue.pop(0)
            for w in g.adjacency_list[u]:
                if w in left:
                    left.discard(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def count_nodal_domains(
    g: WeightedGraph, phi, convention: str = STRONG, zero_tol: float = ZERO_TOL
) -> int:
    """Number of nodal domains of ``phi`` on ``g``.

    Strong counting refuses vectors with zero-classified entries. Weak counting
    counts the components of ``{phi >= 0}`` and ``{phi <= 0}`` that contain at
    least one strictly signed vertex; zero vertices may join both.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (g.V,):
        raise LengthMismatch(f"vector has {phi.size} entries, graph has {g.V} vertices")
    pattern = sign_pattern(phi, zero_tol)
    signs = pattern.signs
    if convention == STRONG:
        if pattern.zeros:
            raise ZeroEntry(f"zero entries at vertices {pattern.zeros}", vertices=pattern.zeros)
        pos = {v for v in range(g.V) if signs[v] > 0}
        return len(_components(g, pos)) + len(_components(g, set(range(g.V)) - pos))
    if convention == WEAK:
        total = 0
        for sgn in (1, -1):
            members = {v for v in range(g.V) if signs[v] in (0, sgn)}
            total += sum(
                1 for comp in _components(g, members) if any(signs[v] == sgn for v in comp)
            )
        return total
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class NodalReport:
    counts: tuple[int, ...]
    convention: str
    degenerate_indices: frozenset[int]
    bound_violations: tuple[tuple[int, int, int, int], ...]
    eigenvalues: tuple[float, ...] = field(default=(), compare=False)
    cycle_rank: int = 0


def _violations(counts, degenerate, l):
    return [
        (n, nu, n - l, n)
        for n, nu in enumerate(counts, start=1)
        if n not in degenerate and not n - l <= nu <= n
    ]


def check_bounds(report: NodalReport, l: int | None = None) -> list[tuple[int, int, int, int]]:
    """Indices violating ``n - l <= nu_n <= n``, as ``(n, nu_n, n - l, n)``.

    Degenerate indices are skipped.
    """
    l = report.cycle_rank if l is None else l
    return _violations(report.counts, report.degenerate_indices, l)


def nodal_sequence(
    g: WeightedGraph,
    L=None,
    convention: str = STRONG,
    zero_tol: float = ZERO_TOL,
    decomposition: SpectralDecomposition | None = None,
) -> NodalReport:
    """Nodal counts of the eigenvectors of ``L`` in ascending eigenvalue order."""
    m = np.asarray(laplacian(g) if L is None else L, dtype=float)
    if m.shape != (g.V, g.V):
        raise DimensionMismatch(f"matrix shape {m.shape} does not match {g.V} vertices")
    dec = decomposition if decomposition is not None else eig_sym(m, zero_tol=zero_tol)
    counts = []
    for n in range(dec.dim):
        try:
            counts.append(count_nodal_domains(g, dec.eigenvectors[:, n], convention, zero_tol))
        except ZeroEntry as exc:
            raise ZeroEntry(
                f"eigenvector {n + 1}: {exc}", index=n + 1, vertices=exc.vertices
            ) from None
    degenerate = frozenset(dec.degenerate_indices)
    return NodalReport(
        tuple(counts),
        convention,
        degenerate,
        tuple(_violations(counts, degenerate, g.l)),
        tuple(float(x) for x in dec.eigenvalues),
        g.l,
    )


def interior_rule_7_1(lam: float, a: float, b: float, c: float) -> int:
    """Nodal count (1 or 2) on the interior triangle of a 7_1 graph."""
    if lam == 0:
        raise ZeroEigenvalue("rule undefined at a zero eigenvalue")
    if (lam < 0 and -lam > max(a, b, c)) or (lam > 0 and lam < min(a, b, c)):
        return 1
    return 2


def predicted_total_7_1(lam: float, a: float, b: float, c: float) -> int:
    """Predicted nodal count of a 7_1 eigenvector from its eigenvalue alone.

    For positive eigenvalues each pendant vertex has the opposite sign of its
    neighbour and adds its own domain.
    """
    return interior_rule_7_1(lam, a, b, c) + (3 if lam > 0 else 0)


@dataclass(frozen=True)
class IsonodalityReport:
    verdict: bool
    counts1: tuple[int, ...]
    counts2: tuple[int, ...]
    mismatches: tuple[int, ...]
    degenerate_indices: frozenset[int]


def isonodal(
    g1: WeightedGraph,
    L1,
    g2: WeightedGraph,
    L2,
    convention: str = STRONG,
    zero_tol: float = ZERO_TOL,
    skip_degenerate: bool = False,
) -> IsonodalityReport:
    """Compare nodal sequences index by index.

    Degenerate indices are always reported; with ``skip_degenerate`` they are
    left out of the verdict.
    """
    if g1.V != g2.V:
        raise DimensionMismatch(f"vertex counts differ: {g1.V} vs {g2.V}")
    r1 = nodal_sequence(g1, L1, convention, zero_tol)
    r2 = nodal_sequence(g2, L2, convention, zero_tol)
    degenerate = r1.degenerate_indices | r2.degenerate_indices
    mismatches = tuple(
        n
        for n, (x, y) in enumerate(zip(r1.counts, r2.counts), start=1)
        if x != y and not (skip_degenerate and n in degenerate)
    )
    return IsonodalityReport(not mismatches, r1.counts, r2.counts, mismatches, degenerate)
