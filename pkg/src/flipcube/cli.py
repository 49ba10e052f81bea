"""Command-line interface.

Every subcommand prints one JSON document (sorted keys, ``"schema": 1``) on
stdout.  Failures print ``{"schema": 1, "error": {...}}`` on stderr and exit
with 2 (usage), 3 (bad input), 4 (search budget exceeded) or 1 (other).

Results of the analysis commands are cached on disk, keyed by the command,
its options and the SHA-256 of every input file.  The cache lives in
``$FLIPCUBE_CACHE`` (default ``~/.cache/flipcube``); ``--no-cache`` skips it.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import flipdist as fd
from . import quadgraph as qg
from .errors import BudgetExceededError, FlipCubeError, InputError, PentagonExistsError
from .generators import Family, FamilySpec, generate
from .io import format_points, format_triangulation, read_points, read_triangulation
from .triangulation import any_triangulation, delaunay, tables

SCHEMA = 1
EXIT_ERROR, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 1, 2, 3, 4
METHODS = ("exact", "cube", "matching", "astar", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -------------------------------------------------------------------- cache


@dataclass
class RunResult:
    command: str
    inputs: dict
    output: dict
    dot: str | None = None
    timing: float = 0.0
    cached: bool = field(default=False)


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


class ResultCache:
    """Content-addressed store of command results, one JSON file per key."""

    def __init__(self, root):
        self.root = Path(root)

    @staticmethod
    def default_root() -> Path:
        env = os.environ.get("FLIPCUBE_CACHE")
        return Path(env) if env else Path.home() / ".cache" / "flipcube"

    def key(self, command: str, options: dict, inputs: dict) -> str:
        blob = json.dumps([__version__, command, options, inputs], sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    def path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str) -> dict | None:
        try:
            entry = json.loads(self.path(key).read_text())
            payload = entry["payload"]
            if entry.get("digest") != _digest(payload):
                return None
            return payload
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def put(self, key: str, payload: dict) -> None:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd_, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd_, "w") as f:
                json.dump({"digest": _digest(payload), "payload": payload}, f, sort_keys=True)
            os.replace(tmp, self.path(key))
        except OSError:
            pass  # a cache that cannot be written is just a cache miss next time


def _file_hash(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ----------------------------------------------------------------- commands


def _cmd_generate(a):
    try:
        family = Family(a.family)
    except ValueError:
        raise UsageError(f"unknown family {a.family!r}")
    P = generate(FamilySpec(family, tuple(a.params), seed=a.seed))
    header = f"{family.value} {' '.join(map(str, a.params))}".strip()
    text = format_points(P, header)
    doc = {"family": family.value, "params": list(a.params), "seed": a.seed, "n": len(P)}
    if a.output:
        Path(a.output).write_text(text)
        doc["path"] = str(a.output)
        return doc, None
    return None, text


def _cmd_pentagon(a):
    P = read_points(a.points)
    w = qg.find_empty_pentagon(P)
    return {"n": len(P), "empty_pentagon": None if w is None else w.ids}, None


def _cmd_quadgraph(a):
    P = read_points(a.points)
    if a.general:
        G = qg.build_qg_general(P, oriented=not P.all_collinear())
    else:
        G = qg.build_qg_pentagon_free(P)
    doc = G.to_json()
    doc.update(n=len(P), n_vertices=G.n_vertices, n_edges=G.n_edges,
               builder="general" if a.general else "pentagon-free")
    return doc, G.to_dot()


def _cmd_triangulate(a):
    P = read_points(a.points)
    if a.edges:
        T = read_triangulation(P, a.edges, complete=a.complete)
    else:
        T = any_triangulation(P)
    is_dt = (not P.all_collinear()) and T == delaunay(P)
    if a.output:
        Path(a.output).write_text(format_triangulation(T))
    return {"edges": [list(e) for e in sorted(T.edges)], "n_edges": len(T.edges),
            "triangles": [list(t) for t in T.triangles()], "delaunay": is_dt}, None


def _cmd_flipgraph(a):
    P = read_points(a.points)
    G = fd.enumerate_flip_graph(P, a.budget)
    doc = G.to_json()
    doc["partial_cube"] = fd.is_partial_cube(G)
    doc["layers"] = list(G.layer_sizes)
    return doc, G.to_dot()


def _cmd_flipdist(a):
    P = read_points(a.points)
    T1 = read_triangulation(P, a.tri1, complete=a.complete)
    T2 = read_triangulation(P, a.tri2, complete=a.complete)
    doc = {"method": a.method}
    if a.method == "exact":
        doc["distance"] = fd.flip_distance_pentagon_free(T1, T2)
    elif a.method == "cube":
        if qg.find_empty_pentagon(P) is not None:
            fd.flip_distance_pentagon_free(T1, T2)  # raises with a witness
        L = fd.cube_labels(P)
        doc["distance"] = L(T1).hamming(L(T2))
    elif a.method == "matching":
        doc["distance"] = None
        doc["lower_bound"] = fd.matching_lower_bound(T1, T2)
    elif a.method == "astar":
        doc["distance"] = fd.astar_flip_distance(T1, T2, budget=a.budget)
        doc["lower_bound"] = fd.matching_lower_bound(T1, T2)
    else:
        doc["distance"] = fd.flip_distance_exact_oracle(T1, T2, budget=a.budget)
    return doc, None


def _cmd_stats(a):
    P = read_points(a.points)
    tb = tables(P)
    w = qg.find_empty_pentagon(P)
    G = qg.build_qg_pentagon_free(P) if w is None else qg.build_qg_tables(P, oriented=False)
    return {"n": len(P), "diagonals": len(tb.diagonals),
            "triangulation_edges": tb.edge_count,
            "empty_quadrilaterals": G.n_edges, "pentagon_free": w is None,
            "empty_pentagon": None if w is None else w.ids,
            "qg_components": int(G.components[0]), "qg_forest": G.is_forest(),
            "unique_triangulation": G.n_edges == 0}, None


COMMANDS = {
    "generate": _cmd_generate,
    "pentagon": _cmd_pentagon,
    "quadgraph": _cmd_quadgraph,
    "triangulate": _cmd_triangulate,
    "flipgraph": _cmd_flipgraph,
    "flipdist": _cmd_flipdist,
    "stats": _cmd_stats,
}
_INPUT_ARGS = ("points", "tri1", "tri2", "edges")
_UNCACHED = {"generate"}
# options that do not change the result document
_IGNORED = {"command", "dot", "no_cache", "output"}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flipcube", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a point set from a named family")
    g.add_argument("family", help="one of: " + ", ".join(f.value for f in Family))
    g.add_argument("params", nargs="*", type=int, help="integer family parameters")
    g.add_argument("--seed", type=int, default=0, help="seed for the random family")
    g.add_argument("-o", "--output", help="points file to write (default: stdout)")

    s = sub.add_parser("pentagon", help="find an empty convex pentagon")
    s.add_argument("points")

    s = sub.add_parser("quadgraph", help="build the quadrilateral graph")
    s.add_argument("points")
    s.add_argument("--general", action="store_true", help="brute-force builder for any set")
    s.add_argument("--dot", help="also write the graph in DOT format to this path")

    s = sub.add_parser("triangulate", help="Delaunay triangulation, or validate/complete an edge list")
    s.add_argument("points")
    s.add_argument("--edges", help="triangulation file to validate")
    s.add_argument("--complete", action="store_true", help="treat --edges as partial and complete it")
    s.add_argument("-o", "--output", help="write the triangulation to this .tri file")

    s = sub.add_parser("flipgraph", help="enumerate the flip graph")
    s.add_argument("points")
    s.add_argument("--budget", type=int, default=fd.DEFAULT_BUDGET, help="max triangulations")
    s.add_argument("--dot", help="also write the graph in DOT format to this path")

    s = sub.add_parser("flipdist", help="flip distance between two triangulations")
    s.add_argument("points")
    s.add_argument("tri1")
    s.add_argument("tri2")
    s.add_argument("--method", choices=METHODS, default="exact",
                   help="exact (pentagon-free), cube labels, matching bound, astar or oracle (BFS)")
    s.add_argument("--complete", action="store_true", help="complete partial edge lists first")
    s.add_argument("--budget", type=int, default=fd.DEFAULT_BUDGET, help="max triangulations searched")

    s = sub.add_parser("stats", help="summary counts for a point set")
    s.add_argument("points")
    return p


def _emit_error(stderr, code: str, message: str, **extra) -> None:
    err = {"code": code, "message": message, **extra}
    stderr.write(json.dumps({"schema": SCHEMA, "error": err}, sort_keys=True) + "\n")


def execute(args, cache: ResultCache | None) -> RunResult:
    inputs = {k: _file_hash(getattr(args, k)) for k in _INPUT_ARGS if getattr(args, k, None)}
    options = {k: v for k, v in vars(args).items() if k not in _IGNORED and k not in _INPUT_ARGS}
    key = None
    if cache is not None and args.command not in _UNCACHED:
        key = cache.key(args.command, options, inputs)
        hit = cache.get(key)
        if hit is not None and not getattr(args, "output", None):
            return RunResult(args.command, inputs, hit["output"], hit.get("dot"), 0.0, cached=True)
    t0 = time.perf_counter()
    doc, extra = COMMANDS[args.command](args)
    elapsed = time.perf_counter() - t0
    if doc is not None:
        doc = {"schema": SCHEMA, "command": args.command, **doc}
    res = RunResult(args.command, inputs, doc, extra, elapsed)
    if key is not None and doc is not None:
        cache.put(key, {"output": doc, "dot": extra})
    return res


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        _emit_error(stderr, "usage", str(e))
        return EXIT_USAGE
    cache = None if args.no_cache else ResultCache(ResultCache.default_root())
    try:
        res = execute(args, cache)
    except UsageError as e:
        _emit_error(stderr, "usage", str(e))
        return EXIT_USAGE
    except PentagonExistsError as e:
        _emit_error(stderr, e.code, str(e), witness=e.witness.ids if e.witness else None)
        return EXIT_INPUT
    except InputError as e:
        _emit_error(stderr, e.code, str(e))
        return EXIT_INPUT
    except BudgetExceededError as e:
        _emit_error(stderr, e.code, str(e))
        return EXIT_BUDGET
    except FlipCubeError as e:
        _emit_error(stderr, e.code, str(e))
        return EXIT_ERROR
    except OSError as e:
        _emit_error(stderr, "io_error", f"{e.strerror or e}: {e.filename}")
        return EXIT_INPUT
    if res.output is None:
        stdout.write(res.dot)      # generate without -o: the points text itself
        return 0
    dot_path = getattr(args, "dot", None)
    if dot_path and res.dot is not None:
        Path(dot_path).write_text(res.dot)
    stdout.write(json.dumps(res.output, sort_keys=True) + "\n")
    return 0


def main() -> None:
    sys.exit(run())
