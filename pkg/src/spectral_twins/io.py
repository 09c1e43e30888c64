"""Graph files and deterministic JSON reports.

Graph file::

    {"vertices": V, "edges": [[u, v, w], ...], "potentials": [...], "lengths": [...]}

Vertex ids in files are 1-based; ``potentials`` and ``lengths`` are optional.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import GraphError
from .graph_core import WeightedGraph, build_graph


class GraphFileError(GraphError):
    pass


def parse_graph(text: str, source: str = "<string>") -> tuple[WeightedGraph, tuple[float, ...] | None]:
    """Parse graph-file text into a graph and optional edge lengths."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise GraphFileError(f"{source}: top level must be an object")
    unknown = set(data) - {"vertices", "edges", "potentials", "lengths"}
    if unknown:
        raise GraphFileError(f"{source}: unknown keys {sorted(unknown)}")
    try:
        V = data["vertices"]
        edges = data["edges"]
    except KeyError as exc:
        raise GraphFileError(f"{source}: missing key {exc.args[0]!r}") from None
    if not isinstance(V, int) or isinstance(V, bool):
        raise GraphFileError(f"{source}: 'vertices' must be an integer")
    if not isinstance(edges, list):
        raise GraphFileError(f"{source}: 'edges' must be a list")
    triples = []
    for idx, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 3 and all(_is_number(x) for x in e)):
            raise GraphFileError(f"{source}: edge {idx} must be [u, v, w], got {e!r}")
        triples.append((e[0] - 1, e[1] - 1, e[2]))
    pots = data.get("potentials")
    if pots is not None and not (isinstance(pots, list) and all(_is_number(x) for x in pots)):
        raise GraphFileError(f"{source}: 'potentials' must be a list of numbers")
    lengths = data.get("lengths")
    if lengths is not None:
        if not (isinstance(lengths, list) and all(_is_number(x) for x in lengths)):
            raise GraphFileError(f"{source}: 'lengths' must be a list of numbers")
        if len(lengths) != len(triples):
            raise GraphFileError(f"{source}: {len(lengths)} lengths for {len(triples)} edges")
        if not all(x > 0 for x in lengths):
            raise GraphFileError(f"{source}: lengths must be positive")
        lengths = tuple(float(x) for x in lengths)
    try:
        g = build_graph(V, triples, pots)
    except GraphError as exc:
        raise GraphFileError(f"{source}: {exc}") from None
    return g, lengths


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def read_graph(path) -> tuple[WeightedGraph, tuple[float, ...] | None]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFileError(f"{path}: {exc.strerror}") from None
    return parse_graph(text, str(path))


def graph_to_dict(g: WeightedGraph, lengths=None) -> dict:
    out = {
        "vertices": g.V,
        "edges": [[u + 1, v + 1, w] for u, v, w in g.edges],
    }
    if any(p != 0 for p in g.potentials):
        out["potentials"] = list(g.potentials)
    if lengths is not None:
        out["lengths"] = list(lengths)
    return out


def write_graph(path, g: WeightedGraph, lengths=None) -> None:
    Path(path).write_text(dumps(graph_to_dict(g, lengths)) + "\n", encoding="utf-8")


def _normalize(obj):
    """Round floats to 15 significant digits and turn arrays/tuples into lists."""
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [_normalize(v) for v in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return _normalize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        x = float(f"{x:.15g}")
        return 0.0 if x == 0 else x
    return obj


def dumps(payload) -> str:
    return json.dumps(_normalize(payload), sort_keys=True, indent=2)
