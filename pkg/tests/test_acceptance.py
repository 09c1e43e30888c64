"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

The lines are printed immediately (visible with ``-s``) and repeated in the
terminal summary by ``conftest.pytest_terminal_summary``.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from spectral_twins.cli import main
from spectral_twins.errors import AtPole, ZeroEntry
from spectral_twins.generators import complete_graph, cycle_graph, random_tree
from spectral_twins.graph_core import (
    INTERIOR_7_1,
    builtin_7_1,
    combinatorial_laplacian,
    laplacian,
    polynomial_apply,
)
from spectral_twins.nodal import isonodal, nodal_sequence, predicted_total_7_1
from spectral_twins.quantum import (
    Reduced71,
    find_roots,
    interior_schur_complement,
    metric_from_weighted,
    reconstruct_7_1,
    reduced_secular_7_1,
    regularized_reduced_7_1,
    vertex_residual,
)
from spectral_twins.spectra import char_poly, charpoly_gap, eig_sym, isospectral, verify_transplantation

from .conftest import suite_seed

RESULTS: list[str] = []

N_TRIPLES = 100
EIG_TOL = 1e-10
POLY_TOL = 1e-9
T_TOL = 1e-10
H_GAP_TOL = 1e-9
ROOT_GAP_TOL = 1e-8
MIN_ROOTS = 30
SCHUR_TOL = 1e-8
RESIDUAL_TOL = 1e-6
ABC = (1.0, 2.0, 3.0)


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def triples():
    rng = np.random.default_rng(suite_seed())
    # (0, 10]: 1 - U[0, 1) lies in (0, 1]
    return [tuple(10.0 * (1.0 - rng.random(3))) for _ in range(N_TRIPLES)]


@pytest.fixture(scope="module")
def scans():
    t0 = time.perf_counter()
    out = {v: find_roots(Reduced71(*ABC, variant=v), 1e-3, 20.0) for v in (1, 2)}
    return out, time.perf_counter() - t0


def test_criterion_1_discrete_isospectrality(triples):
    t0 = time.perf_counter()
    eig_gap = poly_gap = 0.0
    for a, b, c in triples:
        pair = builtin_7_1(a, b, c)
        L1, L2 = laplacian(pair.g1), laplacian(pair.g2)
        eig_gap = max(eig_gap, float(np.max(np.abs(eig_sym(L1).eigenvalues - eig_sym(L2).eigenvalues))))
        poly_gap = max(poly_gap, charpoly_gap(char_poly(L1), char_poly(L2)))
    elapsed = time.perf_counter() - t0
    ok = eig_gap <= EIG_TOL and poly_gap <= POLY_TOL and elapsed < 1.0
    record(
        1,
        "discrete isospectrality",
        ok,
        f"max eigenvalue gap {eig_gap:.2e} (<= {EIG_TOL:g}), max rel char-poly gap {poly_gap:.2e} "
        f"(<= {POLY_TOL:g}), {len(triples)} triples in {elapsed:.3f}s (< 1s)",
    )


def test_criterion_2_transplantation(triples):
    worst = 0.0
    for a, b, c in triples:
        pair = builtin_7_1(a, b, c)
        worst = max(worst, verify_transplantation(laplacian(pair.g1), laplacian(pair.g2), pair.T))
    record(2, "transplantation", worst <= T_TOL, f"max |T^-1 L1 T - L2| = {worst:.2e} (<= {T_TOL:g})")


def test_criterion_3_isonodality_and_rule(triples):
    used = discarded = 0
    failures = []
    for a, b, c in triples:
        pair = builtin_7_1(a, b, c)
        L1, L2 = laplacian(pair.g1), laplacian(pair.g2)
        lam = eig_sym(L1).eigenvalues
        if np.min(np.abs(lam)) < 1e-10:
            discarded += 1
            continue
        try:
            r1 = nodal_sequence(pair.g1, L1)
            r2 = nodal_sequence(pair.g2, L2)
        except ZeroEntry:
            discarded += 1
            continue
        used += 1
        predicted = tuple(predicted_total_7_1(x, a, b, c) for x in r1.eigenvalues)
        within = all(nu in (n - 1, n) for n, nu in enumerate(r1.counts, start=1))
        if r1.counts != r2.counts or r1.counts != predicted or not within:
            failures.append(((a, b, c), r1.counts, r2.counts, predicted))
    ok = not failures and used > 0
    record(
        3,
        "isonodality and case rule",
        ok,
        f"{used} trials used, {discarded} discarded, {len(failures)} mismatches"
        + (f", first {failures[0]}" if failures else ""),
    )


def test_criterion_4_polynomial_family():
    a, b, c = 1.0, math.sqrt(2.0), math.pi
    pair = builtin_7_1(a, b, c)
    L1, L2 = laplacian(pair.g1), laplacian(pair.g2)
    checks = []
    for label, coeffs in (("c x^2", [0.0, 0.0, -1.0]), ("c1 x + c2 x^2", [0.0, 1.0, -0.3])):
        p1, p2 = polynomial_apply(L1, coeffs), polynomial_apply(L2, coeffs)
        ok = p1.valid and p2.valid
        if ok:
            ok = isospectral(p1.matrix, p2.matrix).verdict and isonodal(
                p1.graph, p1.matrix, p2.graph, p2.matrix
            ).verdict
        checks.append((label, ok))
    cubic = polynomial_apply(L1, [0.0, 1.0, 0.1, 1.0])
    complete = cubic.valid and cubic.graph.E == 15
    counts = nodal_sequence(cubic.graph, cubic.matrix).counts if cubic.valid else ()
    checks.append(("cubic complete", complete))
    checks.append(("cubic nodal (1,2,2,2,2,2)", counts == (1, 2, 2, 2, 2, 2)))
    record(4, "polynomial family", all(ok for _, ok in checks), ", ".join(f"{n}={ok}" for n, ok in checks))


def test_criterion_5_trivial_families():
    rng = np.random.default_rng(suite_seed() + 5)
    bad = {"trees": 0, "complete": 0, "cycles": 0}

    def seq(g):
        return nodal_sequence(g, combinatorial_laplacian(g)).counts

    for _ in range(50):
        n = int(rng.integers(2, 11))
        if seq(random_tree(n, rng)) != tuple(range(1, n + 1)):
            bad["trees"] += 1
    for _ in range(20):
        n = int(rng.integers(2, 11))
        if seq(complete_graph(n, rng)) != (1,) + (2,) * (n - 1):
            bad["complete"] += 1
    for _ in range(20):
        n = int(rng.integers(3, 11))
        if seq(cycle_graph(n, rng)) != (1,) + tuple(m - m % 2 for m in range(2, n + 1)):
            bad["cycles"] += 1
    record(
        5,
        "trees / complete graphs / cycles",
        not any(bad.values()),
        f"failures: 50 trees {bad['trees']}, 20 complete {bad['complete']}, 20 cycles {bad['cycles']}",
    )


def test_criterion_6_quantum_isospectrality(scans):
    t0 = time.perf_counter()
    ks = np.linspace(20.0 / 10_000, 20.0, 10_000)
    h_gap = float(np.max(np.abs(regularized_reduced_7_1(*ABC, ks, 1) - regularized_reduced_7_1(*ABC, ks, 2))))
    elapsed = time.perf_counter() - t0 + scans[1]
    r1, r2 = scans[0][1].roots, scans[0][2].roots
    n = min(len(r1), len(r2))
    root_gap = float(np.max(np.abs(np.subtract(r1[:n], r2[:n])))) if n else math.inf
    ok = (
        h_gap <= H_GAP_TOL
        and len(r1) == len(r2)
        and n >= MIN_ROOTS
        and root_gap <= ROOT_GAP_TOL
        and elapsed < 10.0
    )
    record(
        6,
        "quantum isospectrality",
        ok,
        f"max |h1-h2| {h_gap:.2e} on 1e4 points (<= {H_GAP_TOL:g}), roots {len(r1)}/{len(r2)} "
        f"(>= {MIN_ROOTS}), max root gap {root_gap:.2e} (<= {ROOT_GAP_TOL:g}), {elapsed:.2f}s (< 10s)",
    )


def test_criterion_7_schur_identity():
    rng = np.random.default_rng(suite_seed() + 7)
    a, b, c = ABC
    mg = metric_from_weighted(builtin_7_1(a, b, c).g1)
    lengths = (a, b, c, 2 * a, 2 * b, 2 * c)
    worst = 0.0
    n = 0
    while n < 100:
        k = rng.uniform(0.05, 20.0)
        if min(abs(math.sin(k * x)) for x in lengths) < 1e-3:
            continue
        s = interior_schur_complement(mg, k, INTERIOR_7_1)
        r = reduced_secular_7_1(a, b, c, k)
        worst = max(worst, float(np.max(np.abs(s - r)) / np.max(np.abs(r))))
        n += 1
    record(7, "Schur complement identity", worst <= SCHUR_TOL, f"max relative error {worst:.2e} at 100 k (<= {SCHUR_TOL:g})")


def test_criterion_8_eigenfunction_consistency(scans):
    a, b, c = ABC
    pair = builtin_7_1(a, b, c)
    worst = 0.0
    checked = singular = 0
    for v, g in ((1, pair.g1), (2, pair.g2)):
        mg = metric_from_weighted(g)
        for k in scans[0][v].roots:
            try:
                phi = reconstruct_7_1(a, b, c, k, v)
            except AtPole:
                singular += 1
                continue
            worst = max(worst, vertex_residual(mg, k, phi))
            checked += 1
    ok = worst <= RESIDUAL_TOL and singular == 0 and checked > 0
    record(
        8,
        "eigenfunction consistency",
        ok,
        f"max Neumann residual {worst:.2e} over {checked} roots (<= {RESIDUAL_TOL:g}), "
        f"{singular} singular reconstructions",
    )


DETERMINISM_COMMANDS = [
    ["spectrum", "--builtin", "7_1", "--variant", "1"],
    ["spectrum", "--builtin", "7_1", "--variant", "2"],
    ["nodal", "--builtin", "7_1", "--variant", "1"],
    ["nodal", "--builtin", "7_1", "--variant", "2", "--convention", "weak"],
    ["isospectral", "--builtin", "7_1"],
    ["isonodal", "--builtin", "7_1"],
    ["polymap", "--builtin", "7_1", "--coeffs=0,0,-1"],
    ["polymap", "--builtin", "7_1", "--coeffs=0,1,0.1,1"],
    ["quantum", "--builtin", "7_1", "--kmax", "20"],
]


def test_criterion_9_determinism(capsys, tmp_path):
    differing = []
    for argv in DETERMINISM_COMMANDS:
        outs = []
        for _ in range(2):
            main(argv)
            outs.append(capsys.readouterr().out.encode())
        if outs[0] != outs[1]:
            differing.append(" ".join(argv))
    # separate interpreters, including a written graph file
    proc_outs = []
    out = tmp_path / "g.json"
    for _ in range(2):
        out.unlink(missing_ok=True)
        cmd = [sys.executable, "-m", "spectral_twins.cli", "export", "--variant", "2", "--out", str(out)]
        subprocess.run(cmd, check=True, capture_output=True)
        listing = subprocess.run(
            [sys.executable, "-m", "spectral_twins.cli", "spectrum", str(out)], check=True, capture_output=True
        )
        proc_outs.append((out.read_bytes(), listing.stdout))
    if proc_outs[0] != proc_outs[1]:
        differing.append("export/spectrum across processes")
    with capsys.disabled():
        record(
            9,
            "determinism",
            not differing,
            f"{len(DETERMINISM_COMMANDS)} commands in-process plus 2 subprocess runs, "
            f"differing: {differing or 'none'}",
        )
