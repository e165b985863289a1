"""
modules/graph_core/loaders.py

DIMACS (.gr) and plain edge-list ingestion.

DIMACS ids are 1-based and arcs are read as undirected edges (the lighter of
(u,v)/(v,u) wins). Edge lists are 0-based "u v w" lines; an optional
"# vertices N" comment fixes the vertex count.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable

from modules.errors import GraphParseError, ParameterError
from modules.graph_core.graph import WeightedGraph

logger = logging.getLogger(__name__)

FORMATS = ("dimacs", "edge-list")


def detect_format(path: str | Path) -> str:
    return "dimacs" if str(path).endswith(".gr") else "edge-list"


def load_graph(path: str | Path, format: str | None = None) -> WeightedGraph:
    path = str(path)
    fmt = format or detect_format(path)
    if fmt not in FORMATS:
        raise ParameterError(f"unknown graph format '{fmt}'. Available: {list(FORMATS)}")

    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.readlines()

    if fmt == "dimacs":
        n, edges = _parse_dimacs(lines, path)
    else:
        n, edges = _parse_edge_list(lines, path)

    graph = WeightedGraph.from_edges(n, edges, path=path, format=fmt)
    logger.info("Loaded %s graph from %s: n=%d m=%d", fmt, path, graph.vertex_count, graph.edge_count)
    return graph


def _parse_dimacs(lines: Iterable[str], path: str) -> tuple[int, list[tuple[int, int, float]]]:
    n: int | None = None
    edges: list[tuple[int, int, float]] = []
    for number, line in enumerate(lines, start=1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if len(parts) != 4 or parts[1] != "sp":
                raise GraphParseError("expected header 'p sp <n> <m>'", path=path, line_number=number)
            if n is not None:
                raise GraphParseError("duplicate problem line", path=path, line_number=number)
            n = _int(parts[2], path, number)
        elif tag == "a":
            if n is None:
                raise GraphParseError("arc before problem line", path=path, line_number=number)
            if len(parts) != 4:
                raise GraphParseError("expected arc 'a <u> <v> <w>'", path=path, line_number=number)
            u, v = _int(parts[1], path, number), _int(parts[2], path, number)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphParseError(f"vertex id outside 1..{n}", path=path, line_number=number)
            edges.append((u - 1, v - 1, _weight(parts[3], path, number)))
        else:
            raise GraphParseError(f"unknown line type '{tag}'", path=path, line_number=number)
    if n is None:
        raise GraphParseError("missing problem line 'p sp <n> <m>'", path=path)
    return n, edges


def _parse_edge_list(lines: Iterable[str], path: str) -> tuple[int, list[tuple[int, int, float]]]:
    declared: int | None = None
    edges: list[tuple[int, int, float]] = []
    for number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split()
            if len(parts) == 2 and parts[0] == "vertices":
                declared = _int(parts[1], path, number)
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise GraphParseError("expected 'u v w'", path=path, line_number=number)
        u, v = _int(parts[0], path, number), _int(parts[1], path, number)
        if u < 0 or v < 0:
            raise GraphParseError("negative vertex id", path=path, line_number=number)
        if declared is not None and (u >= declared or v >= declared):
            raise GraphParseError(f"vertex id outside 0..{declared - 1}", path=path, line_number=number)
        edges.append((u, v, _weight(parts[2], path, number)))
    if declared is None:
        if not edges:
            raise GraphParseError("edge list is empty", path=path)
        declared = 1 + max(max(u, v) for u, v, _ in edges)
    return declared, edges


def _int(token: str, path: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(f"expected an integer, got '{token}'", path=path, line_number=number) from None


def _weight(token: str, path: str, number: int) -> float:
    try:
        w = float(token)
    except ValueError:
        raise GraphParseError(f"expected a weight, got '{token}'", path=path, line_number=number) from None
    if w < 0 or w != w:
        raise GraphParseError(f"invalid weight {token}", path=path, line_number=number)
    return w


def write_edge_list(graph: WeightedGraph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"# vertices {graph.vertex_count}\n")
        for u, v, w in graph.edges:
            handle.write(f"{u} {v} {w!r}\n")
