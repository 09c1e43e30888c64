"""Dense symmetric eigensolver, characteristic polynomials, isospectrality checks."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NoConvergence, SingularT

MAX_SWEEPS = 50
OFF_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending eigenvalues with sign-normalized unit eigenvectors.

    ``eigenvectors[:, n]`` belongs to ``eigenvalues[n]``; its first entry of
    magnitude above ``zero_tol`` is positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_flags: np.ndarray
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def degenerate_indices(self) -> tuple[int, ...]:
        """1-based indices of eigenvalues within the degeneracy tolerance of a neighbour."""
        return tuple(int(i) + 1 for i in np.flatnonzero(self.degeneracy_flags))


def _as_matrix(L) -> np.ndarray:
    m = np.array(L, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def jacobi_eigh(a: np.ndarray, max_sweeps: int = MAX_SWEEPS, off_tol: float = OFF_TOL):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns unsorted ``(eigenvalues, eigenvectors, sweeps)``. The pivot order
    is fixed row-by-row, so identical input gives bit-identical output.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    threshold = off_tol * max(np.linalg.norm(a), np.finfo(float).tiny)
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        if math.sqrt(2.0 * float(np.sum(a[iu] ** 2))) <= threshold:
            return np.diag(a).copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(diff) + 100.0 * abs(apq) == abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NoConvergence(f"Jacobi did not converge within {max_sweeps} sweeps")


def eig_sym(
    L,
    zero_tol: float = 1e-9,
    degeneracy_tol: float | None = None,
    max_sweeps: int = MAX_SWEEPS,
) -> SpectralDecomposition:
    m = _as_matrix(L)
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-14 * max(1.0, np.abs(m).max())):
        raise DimensionMismatch("eig_sym needs a symmetric matrix")
    m = 0.5 * (m + m.T)
    vals, vecs, sweeps = jacobi_eigh(m, max_sweeps=max_sweeps)
    order = np.argsort(vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    vecs /= np.linalg.norm(vecs, axis=0)
    for j in range(vecs.shape[1]):
        big = np.flatnonzero(np.abs(vecs[:, j]) > zero_tol)
        if big.size and vecs[big[0], j] < 0:
            vecs[:, j] = -vecs[:, j]

    if degeneracy_tol is None:
        spread = float(vals[-1] - vals[0]) if len(vals) else 0.0
        degeneracy_tol = 1e-9 * max(1.0, spread)
    gaps = np.diff(vals) < degeneracy_tol
    flags = np.zeros(len(vals), dtype=bool)
    flags[:-1] |= gaps
    flags[1:] |= gaps
    for arr in (vals, vecs, flags):
        arr.setflags(write=False)
    return SpectralDecomposition(vals, vecs, flags, sweeps)


def char_poly(L) -> np.ndarray:
    """Monic coefficients of ``det(xI - L)``, highest degree first.

    Faddeev-LeVerrier: ``M_k = A M_{k-1} + c_{n-k+1} I`` and
    ``c_{n-k} = -tr(A M_k) / k``.
    """
    a = _as_matrix(L)
    n = a.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[0] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[k - 1] * eye
        coeffs[k] = -np.trace(a @ m) / k
    return coeffs


@dataclass(frozen=True)
class IsospectralityReport:
    max_eigenvalue_gap: float
    charpoly_coeff_gap: float
    verdict: bool
    tolerance_used: float


def charpoly_gap(p1: np.ndarray, p2: np.ndarray) -> float:
    """Largest coefficient difference, each scaled by ``max(1, |c1|, |c2|)``."""
    scale = np.maximum(1.0, np.maximum(np.abs(p1), np.abs(p2)))
    return float(np.max(np.abs(p1 - p2) / scale))


def isospectral(L1, L2, tol: float = 1e-9) -> IsospectralityReport:
    m1, m2 = _as_matrix(L1), _as_matrix(L2)
    if m1.shape != m2.shape:
        raise DimensionMismatch(f"dimensions differ: {m1.shape} vs {m2.shape}")
    e1 = eig_sym(m1).eigenvalues
    e2 = eig_sym(m2).eigenvalues
    eig_gap = float(np.max(np.abs(e1 - e2)))
    poly_gap = charpoly_gap(char_poly(m1), char_poly(m2))
    return IsospectralityReport(eig_gap, poly_gap, eig_gap <= tol and poly_gap <= tol, tol)


def verify_transplantation(L1, L2, T, rcond: float = 1e-12) -> float:
    """Return ``max|T^-1 L1 T - L2|``; raise :class:`SingularT` if T is singular."""
    m1, m2, t = _as_matrix(L1), _as_matrix(L2), _as_matrix(T)
    if not (m1.shape == m2.shape == t.shape):
        raise DimensionMismatch(f"shapes differ: {m1.shape}, {m2.shape}, {t.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(t, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= rcond * max(pivots.max(), np.finfo(float).tiny):
        raise SingularT("transplantation matrix is singular")
    return float(np.max(np.abs(scipy.linalg.lu_solve((lu, piv), m1 @ t) - m2)))
