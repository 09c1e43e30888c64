"""Neumann quantum graphs: secular matrices, regularized secular functions, roots.

On an edge ``(i, j)`` of length ``L`` an eigenfunction with vertex values
``phi(i)``, ``phi(j)`` is

    psi(x) = [phi(i) sin k(L - x) + phi(j) sin kx] / sin kL,

and the Neumann sum of outgoing derivatives at every vertex gives the vertex
secular matrix ``M(k)``. ``M(k)`` has poles where ``sin kL_e = 0``; the
regularized functions here are entire in ``k`` and are evaluated without ever
forming a cot or csc near a pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np
import scipy.optimize
from scipy.ndimage import maximum_filter1d

from .errors import AtPole, BadRange, EdgePole
from .graph_core import WeightedGraph

POLE_TOL = 1e-8
ROOT_TOL = 1e-10
DIP_REL = 1e-6
GRID_STEP = 1e-3
# roots this close (in k) to a pole are treated as sitting on it; high-order
# zeros at commensurate poles only resolve to ~sqrt(eps)
POLE_SNAP = 1e-6

# circle quadrature for the removable singularities of the reduced form
_GUARD = 1e-2
_N_CIRCLE = 16
_CIRCLE = np.exp(2j * np.pi * (np.arange(_N_CIRCLE) + 0.5) / _N_CIRCLE)


@dataclass(frozen=True, eq=False)
class MetricGraph:
    underlying: WeightedGraph
    lengths: tuple[float, ...]

    def __post_init__(self):
        if len(self.lengths) != self.underlying.E:
            raise ValueError(
                f"{len(self.lengths)} lengths for {self.underlying.E} edges"
            )
        if not all(x > 0 and math.isfinite(x) for x in self.lengths):
            raise ValueError("edge lengths must be positive")

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    @property
    def V(self) -> int:
        return self.underlying.V

    @property
    def pole_lengths(self) -> tuple[float, ...]:
        return self.lengths

    def regularized(self, k):
        return _regularized_general(self, k)

    def __repr__(self):
        return f"MetricGraph(V={self.V}, E={self.underlying.E}, total_length={self.total_length:g})"


def metric_from_weighted(g: WeightedGraph, lengths: Sequence[float] | None = None) -> MetricGraph:
    """Metric graph on ``g``; edge lengths default to the edge weights."""
    if lengths is None:
        lengths = [w for _, _, w in g.edges]
    return MetricGraph(g, tuple(float(x) for x in lengths))


def edge_eval(phi_i, phi_j, length, k, x, pole_tol=POLE_TOL):
    """Value of the edge eigenfunction at distance ``x`` from vertex ``i``."""
    s = math.sin(k * length)
    if abs(s) < pole_tol:
        raise EdgePole(f"sin(k L) = {s:.3g} for L={length}, k={k}")
    x = np.asarray(x, dtype=float)
    return (phi_i * np.sin(k * (length - x)) + phi_j * np.sin(k * x)) / s


def edge_outgoing_derivatives(phi_i, phi_j, length, k, pole_tol=POLE_TOL):
    """Derivatives of the edge function pointing out of ``i`` and out of ``j``."""
    s, c = math.sin(k * length), math.cos(k * length)
    if abs(s) < pole_tol:
        raise EdgePole(f"sin(k L) = {s:.3g} for L={length}, k={k}")
    return k * (phi_j - phi_i * c) / s, k * (phi_i - phi_j * c) / s


def _check_poles(lengths, k, pole_tol, what="edge"):
    bad = [i for i, x in enumerate(lengths) if abs(math.sin(k * x)) < pole_tol]
    if bad:
        raise AtPole(f"k={k} is at a pole of {what}(s) {bad}", edges=bad)


def vertex_secular_matrix(mg: MetricGraph, k: float, pole_tol: float = POLE_TOL) -> np.ndarray:
    """``M_vv = sum cot(k L_e)``, ``M_vw = -1/sin(k L_vw)``; ``M(k) phi = 0`` on eigenvalues."""
    _check_poles(mg.lengths, k, pole_tol)
    m = np.zeros((mg.V, mg.V))
    for (u, v, _), length in zip(mg.underlying.edges, mg.lengths):
        s, c = math.sin(k * length), math.cos(k * length)
        m[u, u] += c / s
        m[v, v] += c / s
        m[u, v] -= 1.0 / s
        m[v, u] -= 1.0 / s
    return m


def interior_schur_complement(mg: MetricGraph, k: float, interior: Sequence[int], pole_tol=POLE_TOL):
    """Eliminate the non-interior vertices of ``M(k)``."""
    m = vertex_secular_matrix(mg, k, pole_tol)
    interior = list(interior)
    rest = [v for v in range(mg.V) if v not in interior]
    m_ii = m[np.ix_(interior, interior)]
    if not rest:
        return m_ii
    m_ir = m[np.ix_(interior, rest)]
    m_rr = m[np.ix_(rest, rest)]
    return m_ii - m_ir @ np.linalg.solve(m_rr, m_ir.T)


def augmented_secular_matrix(mg: MetricGraph, k) -> np.ndarray:
    """Entire ``(V+E) x (V+E)`` matrix with ``det = (-1)^V det M(k) prod sin(k L_e)``.

    Unknowns are the vertex values and one sine amplitude ``B_e`` per edge
    (``psi_e = phi(tail) cos kx + B_e sin kx``). Rows ``0..V-1`` are the Neumann
    sums divided by ``k``; rows ``V..V+E-1`` are continuity at edge heads.
    Eliminating the amplitudes returns ``-M(k)``. Vectorized over ``k``.
    """
    k = np.asarray(k, dtype=float)
    V, E = mg.V, mg.underlying.E
    out = np.zeros(k.shape + (V + E, V + E))
    for e, ((t, h, _), length) in enumerate(zip(mg.underlying.edges, mg.lengths)):
        s, c = np.sin(k * length), np.cos(k * length)
        row = V + e
        out[..., row, t] += c
        out[..., row, row] += s
        out[..., row, h] -= 1.0
        out[..., t, row] += 1.0
        out[..., h, t] += s
        out[..., h, row] -= c
    return out


def _regularized_general(mg: MetricGraph, k):
    det = np.linalg.det(augmented_secular_matrix(mg, k))
    return -det if mg.V % 2 else det


def _lengths_7_1(b, c, variant):
    return (b, c) if variant == 1 else (c, b)


def reduced_secular_7_1(a, b, c, k, variant=1, pole_tol=POLE_TOL) -> np.ndarray:
    """The 3x3 interior secular matrix of the 7_1 graph (interior vertices in order)."""
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    b, c = _lengths_7_1(b, c, variant)
    _check_poles((a, b, c, 2 * a, 2 * b, 2 * c), k, pole_tol, "length")

    def cot(t):
        return math.cos(t) / math.sin(t)

    def csc(t):
        return 1.0 / math.sin(t)

    return np.array(
        [
            [2 * cot(2 * k * c) + cot(k * b), -csc(k * c), -csc(k * b)],
            [-csc(k * c), 2 * cot(2 * k * a) + cot(k * c), -csc(k * a)],
            [-csc(k * b), -csc(k * a), 2 * cot(2 * k * b) + cot(k * a)],
        ]
    )


def _row_cleared_det(a, b, c, k):
    """det of the reduced matrix with each row times its own pole-clearing factor.

    Row with diagonal ``2cot(2kx) + cot(ky)`` is multiplied by ``sin(2kx) sin(ky)``;
    the result equals ``h(k) prod sin(2kx) * sin(ka) sin(kb) sin(kc)``.
    Works for real or complex ``k``.
    """
    sa, sb, sc = np.sin(k * a), np.sin(k * b), np.sin(k * c)
    ca, cb, cc = np.cos(k * a), np.cos(k * b), np.cos(k * c)
    s2a, s2b, s2c = np.sin(2 * k * a), np.sin(2 * k * b), np.sin(2 * k * c)
    c2a, c2b, c2c = np.cos(2 * k * a), np.cos(2 * k * b), np.cos(2 * k * c)
    m00 = 2 * c2c * sb + s2c * cb
    m01 = -2 * cc * sb
    m02 = -s2c
    m10 = -s2a
    m11 = 2 * c2a * sc + s2a * cc
    m12 = -2 * ca * sc
    m20 = -2 * cb * sa
    m21 = -s2b
    m22 = 2 * c2b * sa + s2b * ca
    det = (
        m00 * (m11 * m22 - m12 * m21)
        - m01 * (m10 * m22 - m12 * m20)
        + m02 * (m10 * m21 - m11 * m20)
    )
    return det, sa * sb * sc


def regularized_reduced_7_1(a, b, c, k, variant=1):
    """``det A(k) * sin(2ka) sin(2kb) sin(2kc)``, entire in ``k``; vectorized.

    Near zeros of ``sin(kx)`` the removable singularity is evaluated as the
    mean over a small circle in the complex ``k`` plane.
    """
    b, c = _lengths_7_1(b, c, variant)
    k = np.asarray(k, dtype=float)
    det, denom = _row_cleared_det(a, b, c, k)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray(det / denom, dtype=float)
    guard = (
        np.minimum(np.minimum(np.abs(np.sin(k * a)), np.abs(np.sin(k * b))), np.abs(np.sin(k * c)))
        < _GUARD
    )
    if np.any(guard):
        r = 0.05 / max(a, b, c)
        kc = k[guard][..., None] + r * _CIRCLE
        det_c, denom_c = _row_cleared_det(a, b, c, kc)
        out = np.array(out)
        out[guard] = np.mean(det_c / denom_c, axis=-1).real
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Reduced71:
    """Secular target built from the closed-form 3x3 interior matrix of a 7_1 graph."""

    a: float
    b: float
    c: float
    variant: int = 1

    @property
    def pole_lengths(self) -> tuple[float, ...]:
        # includes the half-period points where boundary reconstruction divides by cos(kx)
        return (self.a, self.b, self.c, 2 * self.a, 2 * self.b, 2 * self.c)

    def matrix(self, k, pole_tol=POLE_TOL):
        return reduced_secular_7_1(self.a, self.b, self.c, k, self.variant, pole_tol)

    def regularized(self, k):
        return regularized_reduced_7_1(self.a, self.b, self.c, k, self.variant)


class SecularTarget(Protocol):
    pole_lengths: tuple[float, ...]

    def regularized(self, k): ...


def regularized_secular(target: SecularTarget, k):
    """Pole-free secular function of a :class:`MetricGraph` or :class:`Reduced71`."""
    return target.regularized(k)


@dataclass(frozen=True)
class SecularScan:
    k_min: float
    k_max: float
    grid_step: float
    roots: tuple[float, ...]
    flagged: tuple[float, ...]
    flag_kinds: tuple[str, ...] = field(default=())

    def flagged_of_kind(self, kind: str) -> tuple[float, ...]:
        return tuple(k for k, why in zip(self.flagged, self.flag_kinds) if why == kind)


def _near_pole(k, lengths, tol):
    return any(abs(math.sin(k * x)) < tol for x in lengths)


def _pole_distance(k, lengths):
    return min(abs(k - round(k * x / math.pi) * math.pi / x) for x in lengths)


def _merge_flags(flags, tol):
    order = {"pole": 0, "dip": 1, "grid-pole": 2}
    merged: list[tuple[float, str]] = []
    for k, why in sorted(flags):
        if merged and k - merged[-1][0] <= tol:
            if order[why] < order[merged[-1][1]]:
                merged[-1] = (merged[-1][0], why)
            continue
        merged.append((k, why))
    return merged


def find_roots(
    target: SecularTarget,
    k_min: float,
    k_max: float,
    grid_step: float = GRID_STEP,
    root_tol: float = ROOT_TOL,
    pole_tol: float = POLE_TOL,
    dip_rel: float = DIP_REL,
    window: int = 100,
) -> SecularScan:
    """Bracket sign changes of the regularized secular function and bisect them.

    Roots within ``POLE_SNAP`` of a pole of the edge ansatz are moved to
    ``flagged`` with kind ``"pole"``; grid points on a pole get kind ``"grid-pole"``. Local
    minima of ``|h|`` without a sign change are minimized: a hidden sign change
    is bisected, a near-touch below ``dip_rel`` times the local scale is
    flagged as a probable double root (kind ``"dip"``).
    """
    if not (0 < k_min < k_max) or not math.isfinite(k_max):
        raise BadRange(f"need 0 < k_min < k_max, got ({k_min}, {k_max})")
    if not (0 < grid_step <= k_max - k_min):
        raise BadRange(f"grid_step {grid_step} does not fit in ({k_min}, {k_max})")

    n = int(math.ceil((k_max - k_min) / grid_step))
    ks = k_min + grid_step * np.arange(n + 1)
    ks[-1] = k_max
    hs = np.asarray(target.regularized(ks), dtype=float)
    absh = np.abs(hs)
    scale = maximum_filter1d(absh, size=2 * window + 1, mode="nearest")

    def f(k):
        return float(target.regularized(k))

    def bisect(lo, hi):
        return scipy.optimize.bisect(f, lo, hi, xtol=root_tol, rtol=4 * np.finfo(float).eps)

    candidates: list[float] = []
    flagged: list[tuple[float, str]] = []
    for j in np.flatnonzero(hs == 0.0):
        if 0 < j < n:
            candidates.append(float(ks[j]))
    for j in np.flatnonzero(hs[:-1] * hs[1:] < 0):
        candidates.append(bisect(ks[j], ks[j + 1]))

    interior = np.arange(1, n)
    same_sign = (hs[:-2] * hs[1:-1] > 0) & (hs[1:-1] * hs[2:] > 0)
    local_min = (absh[1:-1] <= absh[:-2]) & (absh[1:-1] <= absh[2:])
    for j in interior[same_sign & local_min & (absh[1:-1] <= 1e-2 * scale[1:-1])]:
        sgn = math.copysign(1.0, hs[j])
        lo, hi = float(ks[j - 1]), float(ks[j + 1])
        res = scipy.optimize.minimize_scalar(
            lambda k: sgn * f(k), bounds=(lo, hi), method="bounded", options={"xatol": root_tol}
        )
        kstar, fstar = float(res.x), sgn * float(res.fun)
        if sgn * fstar < 0:
            candidates.extend([bisect(lo, kstar), bisect(kstar, hi)])
        elif abs(fstar) <= dip_rel * scale[j]:
            on_pole = _pole_distance(kstar, target.pole_lengths) <= POLE_SNAP
            flagged.append((kstar, "pole" if on_pole else "dip"))

    roots: list[float] = []
    for k in sorted(candidates):
        if not k_min < k < k_max:
            continue
        if _pole_distance(k, target.pole_lengths) <= POLE_SNAP:
            flagged.append((k, "pole"))
        elif not roots or k - roots[-1] > 10 * root_tol:
            roots.append(k)

    for k in ks[1:-1]:
        if _near_pole(float(k), target.pole_lengths, pole_tol):
            flagged.append((float(k), "grid-pole"))

    flagged = _merge_flags(flagged, POLE_SNAP)
    return SecularScan(
        float(k_min),
        float(k_max),
        float(grid_step),
        tuple(roots),
        tuple(k for k, _ in flagged),
        tuple(why for _, why in flagged),
    )


def null_vector(mg: MetricGraph, k: float, pole_tol: float = POLE_TOL) -> np.ndarray:
    """Smallest right singular vector of ``M(k)``, scaled to max-norm 1."""
    _, _, vt = np.linalg.svd(vertex_secular_matrix(mg, k, pole_tol))
    phi = vt[-1]
    return phi / phi[np.argmax(np.abs(phi))]


def reconstruct_7_1(a, b, c, k, variant=1, pole_tol=POLE_TOL) -> np.ndarray:
    """Vertex values of a 7_1 eigenfunction from the null vector of the 3x3 matrix.

    Pendant values follow from the Neumann condition at the pendant vertex,
    ``phi(pendant) = phi(neighbour) / cos(k L)``.
    """
    A = reduced_secular_7_1(a, b, c, k, variant, pole_tol)
    _, _, vt = np.linalg.svd(A)
    inner = vt[-1]
    bb, cc = _lengths_7_1(b, c, variant)
    pend = (cc, a, bb)
    cosines = [math.cos(k * x) for x in pend]
    bad = [i for i, cs in enumerate(cosines) if abs(cs) < pole_tol]
    if bad:
        raise AtPole(f"cos(kL) vanishes on pendant edge(s) {bad} at k={k}", edges=bad)
    phi = np.concatenate([inner / np.array(cosines), inner])
    return phi / phi[np.argmax(np.abs(phi))]


def vertex_residual(mg: MetricGraph, k: float, phi, pole_tol: float = POLE_TOL) -> float:
    """Largest Neumann derivative sum over vertices, relative to ``max|phi|``."""
    phi = np.asarray(phi, dtype=float)
    sums = np.zeros(mg.V)
    for (u, v, _), length in zip(mg.underlying.edges, mg.lengths):
        du, dv = edge_outgoing_derivatives(phi[u], phi[v], length, k, pole_tol)
        sums[u] += du
        sums[v] += dv
    return float(np.max(np.abs(sums)) / np.max(np.abs(phi)))
