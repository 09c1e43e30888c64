"""Command-line interface: ``spectral-twins <command> ...``.

Every command prints one JSON report ``{command, inputs, results, warnings}``
to stdout. Exit codes: 0 success or true verdict, 1 false verdict, 2 input
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io
from .errors import GraphError, NumericalError, SpectralTwinsError, ZeroEntry
from .graph_core import (
    WeightedGraph,
    combinatorial_laplacian,
    graph_7_1,
    laplacian,
    polynomial_apply,
)
from .nodal import isonodal, nodal_sequence, predicted_total_7_1
from .quantum import (
    GRID_STEP,
    Reduced71,
    SecularScan,
    find_roots,
    metric_from_weighted,
)
from .spectra import char_poly, eig_sym, isospectral

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def to_json(self) -> str:
        return io.dumps(
            {
                "command": self.command,
                "inputs": self.inputs,
                "results": self.results,
                "warnings": self.warnings,
            }
        )


@dataclass
class Source:
    graph: WeightedGraph
    lengths: tuple[float, ...] | None
    label: str
    weights: tuple[float, float, float] | None = None
    variant: int | None = None


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _weights(args) -> tuple[float, float, float]:
    w = _parse_floats(args.weights, "--weights")
    if len(w) != 3 or not all(x > 0 for x in w):
        raise InputError(f"--weights needs three positive numbers, got {args.weights!r}")
    return w[0], w[1], w[2]


def _load(path: str | None, args, variant: int | None = None) -> Source:
    if path is not None:
        g, lengths = io.read_graph(path)
        return Source(g, lengths, str(path))
    if getattr(args, "builtin", None) != "7_1":
        raise InputError("give a graph file or --builtin 7_1")
    a, b, c = _weights(args)
    v = variant if variant is not None else args.variant
    return Source(graph_7_1(a, b, c, v), None, f"7_1/{v}", (a, b, c), v)


def _source_inputs(src: Source) -> dict:
    d = {"source": src.label}
    if src.weights is not None:
        d["weights"] = list(src.weights)
        d["variant"] = src.variant
    return d


def cmd_spectrum(args) -> tuple[RunReport, int]:
    src = _load(args.graph, args)
    L = laplacian(src.graph)
    dec = eig_sym(L)
    rep = RunReport("spectrum", _source_inputs(src))
    rep.results = {
        "eigenvalues": dec.eigenvalues,
        "eigenvectors": dec.eigenvectors.T,
        "char_poly": char_poly(L),
        "trace": float(np.trace(L.entries)),
        "degenerate_indices": dec.degenerate_indices,
    }
    if dec.degenerate_indices:
        rep.warnings.append(f"degenerate eigenvalue indices {list(dec.degenerate_indices)}")
    return rep, EXIT_OK


def _nodal_payload(src: Source, L, convention: str, zero_tol: float, rep: RunReport) -> dict:
    try:
        report = nodal_sequence(src.graph, L, convention, zero_tol)
    except ZeroEntry as exc:
        raise NumericalError(str(exc)) from None
    if convention == "weak":
        dec = eig_sym(L, zero_tol=zero_tol)
        for n in range(dec.dim):
            phi = dec.eigenvectors[:, n]
            if np.any(np.abs(phi) <= zero_tol * np.abs(phi).max()):
                rep.warnings.append(f"eigenvector {n + 1} has zero entries")
    if report.degenerate_indices:
        rep.warnings.append(f"degenerate eigenvalue indices {sorted(report.degenerate_indices)}")
    payload = {
        "counts": report.counts,
        "eigenvalues": report.eigenvalues,
        "cycle_rank": report.cycle_rank,
        "bound_violations": report.bound_violations,
        "degenerate_indices": report.degenerate_indices,
    }
    if report.bound_violations:
        rep.warnings.append(f"nodal bound violations {list(report.bound_violations)}")
    return payload


def cmd_nodal(args) -> tuple[RunReport, int]:
    src = _load(args.graph, args)
    rep = RunReport(
        "nodal",
        {
            **_source_inputs(src),
            "convention": args.convention,
            "zero_tol": args.zero_tol,
            "combinatorial": args.combinatorial,
        },
    )
    L = combinatorial_laplacian(src.graph) if args.combinatorial else laplacian(src.graph)
    rep.results = _nodal_payload(src, L, args.convention, args.zero_tol, rep)
    if src.weights is not None and not args.combinatorial:
        a, b, c = src.weights
        predicted = [
            predicted_total_7_1(lam, a, b, c) if lam != 0 else None
            for lam in rep.results["eigenvalues"]
        ]
        rep.results["predicted"] = predicted
        rep.results["rule_matches"] = predicted == list(rep.results["counts"])
    return rep, EXIT_OK


def _pair(args) -> tuple[Source, Source]:
    if args.graph1 is not None and args.graph2 is not None:
        return _load(args.graph1, args), _load(args.graph2, args)
    if args.graph1 is None and args.graph2 is None:
        return _load(None, args, 1), _load(None, args, 2)
    raise InputError("give two graph files, or none with --builtin 7_1")


def cmd_isospectral(args) -> tuple[RunReport, int]:
    s1, s2 = _pair(args)
    rep = RunReport(
        "isospectral",
        {"graph1": _source_inputs(s1), "graph2": _source_inputs(s2), "tol": args.tol},
    )
    if s1.graph.V != s2.graph.V:
        rep.results = {"verdict": False, "reason": "vertex counts differ"}
        return rep, EXIT_FALSE
    r = isospectral(laplacian(s1.graph), laplacian(s2.graph), args.tol)
    rep.results = {
        "verdict": r.verdict,
        "max_eigenvalue_gap": r.max_eigenvalue_gap,
        "charpoly_coeff_gap": r.charpoly_coeff_gap,
        "tolerance_used": r.tolerance_used,
    }
    return rep, EXIT_OK if r.verdict else EXIT_FALSE


def cmd_isonodal(args) -> tuple[RunReport, int]:
    s1, s2 = _pair(args)
    rep = RunReport(
        "isonodal",
        {"graph1": _source_inputs(s1), "graph2": _source_inputs(s2), "convention": args.convention},
    )
    if s1.graph.V != s2.graph.V:
        rep.results = {"verdict": False, "reason": "vertex counts differ"}
        return rep, EXIT_FALSE
    try:
        r = isonodal(
            s1.graph, laplacian(s1.graph), s2.graph, laplacian(s2.graph), args.convention
        )
    except ZeroEntry as exc:
        raise NumericalError(str(exc)) from None
    rep.results = {
        "verdict": r.verdict,
        "counts1": r.counts1,
        "counts2": r.counts2,
        "mismatches": r.mismatches,
        "degenerate_indices": r.degenerate_indices,
    }
    if r.degenerate_indices:
        rep.warnings.append(f"degenerate eigenvalue indices {sorted(r.degenerate_indices)}")
    return rep, EXIT_OK if r.verdict else EXIT_FALSE


def cmd_polymap(args) -> tuple[RunReport, int]:
    coeffs = _parse_floats(args.coeffs, "--coeffs")
    if not coeffs:
        raise InputError("--coeffs must not be empty")
    src = _load(args.graph, args, 1 if args.graph is None else None)
    rep = RunReport("polymap", {**_source_inputs(src), "coeffs": coeffs})
    pm = polynomial_apply(laplacian(src.graph), coeffs)
    rep.results = {
        "matrix": pm.matrix,
        "valid": pm.valid,
        "edges": None if pm.graph is None else pm.graph.E,
    }
    if not pm.valid:
        rep.warnings.append("P(L) has positive off-diagonal entries; not a generalized Laplacian")
        return rep, EXIT_OK
    rep.results["complete"] = pm.graph.E == pm.graph.V * (pm.graph.V - 1) // 2
    if args.out:
        io.write_graph(args.out, pm.graph)
        rep.results["graph_file"] = str(args.out)

    if src.weights is not None:
        other = _load(None, args, 2)
        pm2 = polynomial_apply(laplacian(other.graph), coeffs)
        if not pm2.valid:
            rep.warnings.append("P(L2) is not a generalized Laplacian")
            return rep, EXIT_FALSE
        iso = isospectral(pm.matrix, pm2.matrix, args.tol)
        try:
            nod = isonodal(pm.graph, pm.matrix, pm2.graph, pm2.matrix)
        except ZeroEntry as exc:
            raise NumericalError(str(exc)) from None
        rep.results["pair"] = {
            "isospectral": iso.verdict,
            "max_eigenvalue_gap": iso.max_eigenvalue_gap,
            "charpoly_coeff_gap": iso.charpoly_coeff_gap,
            "isonodal": nod.verdict,
            "counts1": nod.counts1,
            "counts2": nod.counts2,
        }
        if nod.degenerate_indices:
            rep.warnings.append(f"degenerate eigenvalue indices {sorted(nod.degenerate_indices)}")
        return rep, EXIT_OK if iso.verdict and nod.verdict else EXIT_FALSE
    return rep, EXIT_OK


def _scan_payload(scan: SecularScan) -> dict:
    return {
        "roots": scan.roots,
        "flagged": [{"k": k, "kind": why} for k, why in zip(scan.flagged, scan.flag_kinds)],
    }


def cmd_quantum(args) -> tuple[RunReport, int]:
    if not (0 < args.kmin < args.kmax):
        raise InputError(f"need 0 < --kmin < --kmax, got {args.kmin}, {args.kmax}")
    scan_kw = dict(k_min=args.kmin, k_max=args.kmax, grid_step=args.grid)
    if args.graph is not None:
        src = _load(args.graph, args)
        mg = metric_from_weighted(src.graph, src.lengths)
        rep = RunReport(
            "quantum",
            {**_source_inputs(src), "kmin": args.kmin, "kmax": args.kmax, "grid": args.grid},
        )
        scan = find_roots(mg, **scan_kw)
        rep.results = {"total_length": mg.total_length, **_scan_payload(scan)}
        targets = [mg]
    else:
        if args.builtin != "7_1":
            raise InputError("give a graph file or --builtin 7_1")
        a, b, c = _weights(args)
        rep = RunReport(
            "quantum",
            {"source": "7_1", "weights": [a, b, c], "kmin": args.kmin, "kmax": args.kmax,
             "grid": args.grid},
        )
        targets = [Reduced71(a, b, c, 1), Reduced71(a, b, c, 2)]
        scans = [find_roots(t, **scan_kw) for t in targets]
        r1, r2 = scans[0].roots, scans[1].roots
        same_count = len(r1) == len(r2)
        gap = float(np.max(np.abs(np.subtract(r1, r2)))) if same_count and r1 else 0.0
        rep.results = {
            "variant1": _scan_payload(scans[0]),
            "variant2": _scan_payload(scans[1]),
            "root_counts": [len(r1), len(r2)],
            "max_root_gap": gap if same_count else None,
        }
        if not same_count:
            rep.warnings.append("variants have different numbers of unflagged roots")
    if args.emit_secular:
        ks = args.kmin + args.grid * np.arange(int(np.floor((args.kmax - args.kmin) / args.grid)) + 1)
        cols = [np.asarray(t.regularized(ks)) for t in targets]
        with open(args.emit_secular, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["k"] + [f"h{i + 1}" for i in range(len(cols))])
            for i, k in enumerate(ks):
                w.writerow([f"{k:.15g}"] + [f"{col[i]:.15g}" for col in cols])
        rep.results["secular_csv"] = str(args.emit_secular)
    return rep, EXIT_OK


def cmd_export(args) -> tuple[RunReport, int]:
    src = _load(None, args)
    io.write_graph(args.out, src.graph)
    rep = RunReport("export", _source_inputs(src), {"graph_file": str(args.out)})
    return rep, EXIT_OK


def _add_builtin(p: argparse.ArgumentParser, variant=True) -> None:
    p.add_argument("--builtin", choices=["7_1"], help="use the built-in 7_1 pair")
    if variant:
        p.add_argument("--variant", type=int, choices=[1, 2], default=1)
    p.add_argument("--weights", default="1,2,3", help="a,b,c for the built-in pair")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-twins", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues, eigenvectors and characteristic polynomial")
    p.add_argument("graph", nargs="?")
    _add_builtin(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("nodal", help="nodal count sequence and bound check")
    p.add_argument("graph", nargs="?")
    _add_builtin(p)
    p.add_argument("--convention", choices=["strong", "weak"], default="strong")
    p.add_argument("--zero-tol", type=float, default=1e-9)
    p.add_argument(
        "--combinatorial",
        action="store_true",
        help="use potentials -sum(w) instead of the file's potentials",
    )
    p.set_defaults(func=cmd_nodal)

    for name, func in (("isospectral", cmd_isospectral), ("isonodal", cmd_isonodal)):
        p = sub.add_parser(name, help=f"{name} verdict for two graphs")
        p.add_argument("graph1", nargs="?")
        p.add_argument("graph2", nargs="?")
        _add_builtin(p, variant=False)
        if name == "isospectral":
            p.add_argument("--tol", type=float, default=1e-9)
        else:
            p.add_argument("--convention", choices=["strong", "weak"], default="strong")
        p.set_defaults(func=func)

    p = sub.add_parser("polymap", help="apply a polynomial to the Laplacian")
    p.add_argument("graph", nargs="?")
    _add_builtin(p, variant=False)
    p.add_argument("--coeffs", required=True, help="c0,c1,... for P(x) = sum c_k x^k")
    p.add_argument("--out", help="write the induced graph file here")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_polymap)

    p = sub.add_parser("quantum", help="Neumann quantum graph secular roots")
    p.add_argument("graph", nargs="?")
    _add_builtin(p, variant=False)
    p.add_argument("--kmin", type=float, default=GRID_STEP)
    p.add_argument("--kmax", type=float, default=20.0)
    p.add_argument("--grid", type=float, default=GRID_STEP)
    p.add_argument("--emit-secular", metavar="CSV", help="write (k, h(k)) table")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("export", help="write a built-in graph to a graph file")
    _add_builtin(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export, builtin="7_1")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep, code = args.func(args)
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, SpectralTwinsError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(rep.to_json() + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
