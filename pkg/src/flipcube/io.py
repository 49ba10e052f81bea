"""Text formats.

``.pts``: one point per line, two whitespace-separated integers; lines
starting with ``#`` and blank lines are skipped.  Point ids count the
remaining lines from zero.

``.tri``: one edge per line, two point ids ``i j`` with ``i < j``.
"""
from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError
from .geom import PointSet
from .triangulation import Triangulation, complete_to_triangulation

_INT = re.compile(r"[+-]?\d+\Z")


def _rows(text: str, what: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not all(_INT.match(p) for p in parts):
            raise ParseError(f"{what} line {lineno}: expected two integers, got {raw!r}")
        yield lineno, int(parts[0]), int(parts[1])


def parse_points(text: str) -> PointSet:
    return PointSet([(x, y) for _, x, y in _rows(text, "points")])


def format_points(P: PointSet, header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [f"{x} {y}" for x, y in P.coords]
    return "\n".join(lines) + "\n"


def parse_triangulation(P: PointSet, text: str, complete: bool = False) -> Triangulation:
    """Parse and validate an edge list; with ``complete`` extend it greedily."""
    edges = []
    n = len(P)
    for lineno, i, j in _rows(text, "triangulation"):
        if not i < j:
            raise ParseError(f"triangulation line {lineno}: need i < j, got {i} {j}")
        if j >= n or i < 0:
            raise ParseError(f"triangulation line {lineno}: id out of range for {n} points")
        edges.append((i, j))
    if complete:
        return complete_to_triangulation(P, edges)
    return Triangulation(P, edges)


def format_triangulation(T: Triangulation) -> str:
    return "".join(f"{i} {j}\n" for i, j in sorted(T.edges))


def read_points(path) -> PointSet:
    return parse_points(Path(path).read_text())


def write_points(path, P: PointSet, header: str | None = None) -> None:
    Path(path).write_text(format_points(P, header))


def read_triangulation(P: PointSet, path, complete: bool = False) -> Triangulation:
    return parse_triangulation(P, Path(path).read_text(), complete)


def write_triangulation(path, T: Triangulation) -> None:
    Path(path).write_text(format_triangulation(T))
