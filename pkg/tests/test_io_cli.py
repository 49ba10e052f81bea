import io
import json
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import point_sets
from flipcube import cli
from flipcube.errors import InvalidTriangulationError, ParseError
from flipcube.io import (format_points, format_triangulation, parse_points,
                         parse_triangulation, read_points, write_points, write_triangulation)
from flipcube.triangulation import complete_to_triangulation, delaunay


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("FLIPCUBE_CACHE", str(d))
    return d


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def fail(expected, *argv):
    code, out, err = call(*argv)
    assert code == expected, (out, err)
    assert out == ""
    return json.loads(err)["error"]


@pytest.fixture
def hex_files(tmp_path, hexagon):
    pts = tmp_path / "hex.pts"
    write_points(pts, hexagon)
    t1 = tmp_path / "t1.tri"
    t2 = tmp_path / "t2.tri"
    write_triangulation(t1, complete_to_triangulation(hexagon, [(0, 2), (0, 4), (2, 4)]))
    write_triangulation(t2, complete_to_triangulation(hexagon, [(1, 3), (1, 5), (3, 5)]))
    return pts, t1, t2


# ------------------------------------------------------------------- io

@given(point_sets(min_size=0, max_size=12, box=10**6))
def test_points_round_trip(P):
    assert parse_points(format_points(P, "hdr")) == P


def test_points_parse_errors():
    assert parse_points("# c\n\n 1 2 \n-3 +4\n").coords == ((1, 2), (-3, 4))
    for bad in ["1\n", "1 2 3\n", "a b\n", "1.5 2\n"]:
        with pytest.raises(ParseError):
            parse_points(bad)


@given(point_sets(min_size=3, max_size=9, box=5))
def test_triangulation_round_trip(P):
    T = complete_to_triangulation(P)
    assert parse_triangulation(P, format_triangulation(T)) == T


def test_triangulation_parse_errors(hexagon):
    with pytest.raises(ParseError):
        parse_triangulation(hexagon, "2 0\n")
    with pytest.raises(ParseError):
        parse_triangulation(hexagon, "0 9\n")
    with pytest.raises(InvalidTriangulationError):
        parse_triangulation(hexagon, "0 2\n")
    T = parse_triangulation(hexagon, "0 2\n", complete=True)
    assert (0, 2) in T.edges


def test_file_helpers(tmp_path, grid):
    write_points(tmp_path / "g.pts", grid, "grid")
    assert (tmp_path / "g.pts").read_text().startswith("# grid\n")
    assert read_points(tmp_path / "g.pts") == grid
    write_triangulation(tmp_path / "g.tri", delaunay(grid))
    assert len((tmp_path / "g.tri").read_text().splitlines()) == 16


# ------------------------------------------------------------------ cli

def test_generate_round_trip(tmp_path, cache_dir, grid):
    doc = ok("generate", "lattice", 3, 3, "-o", tmp_path / "g.pts")
    assert doc["n"] == 9 and doc["schema"] == 1
    assert read_points(tmp_path / "g.pts") == grid
    code, out, _ = call("generate", "two-lines", 2, 2)
    assert code == 0 and parse_points(out) == parse_points("0 0\n1 0\n0 1\n1 1\n")


def test_pentagon_command(tmp_path, cache_dir, grid, fixtures):
    write_points(tmp_path / "g.pts", grid)
    assert ok("pentagon", tmp_path / "g.pts")["empty_pentagon"] is None
    write_points(tmp_path / "p.pts", fixtures["pentagon"])
    assert sorted(ok("pentagon", tmp_path / "p.pts")["empty_pentagon"]) == [0, 1, 2, 3, 4]


def test_flipdist_hexagon(hex_files, cache_dir):
    pts, t1, t2 = hex_files
    assert ok("flipdist", pts, t1, t2, "--method", "oracle")["distance"] == 4
    assert ok("flipdist", pts, t1, t2, "--method", "matching")["lower_bound"] == 3
    doc = ok("flipdist", pts, t1, t2, "--method", "astar")
    assert doc["distance"] == 4 and doc["lower_bound"] == 3
    err = fail(3, "flipdist", pts, t1, t2, "--method", "exact")
    assert len(err["witness"]) == 5
    fail(3, "flipdist", pts, t1, t2, "--method", "cube")


def test_flipdist_on_grid(tmp_path, cache_dir, grid):
    write_points(tmp_path / "g.pts", grid)
    write_triangulation(tmp_path / "a.tri", delaunay(grid))
    (tmp_path / "b.tri").write_text("0 4\n")
    args = ("flipdist", tmp_path / "g.pts", tmp_path / "a.tri", tmp_path / "b.tri", "--complete")
    d = {m: ok(*args, "--method", m) for m in cli.METHODS}
    assert len({v["distance"] for k, v in d.items() if k != "matching"}) == 1
    assert d["matching"]["lower_bound"] == d["exact"]["distance"]


def test_flipgraph_and_dot(tmp_path, cache_dir, grid):
    write_points(tmp_path / "g.pts", grid)
    doc = ok("flipgraph", tmp_path / "g.pts", "--dot", tmp_path / "fg.dot")
    assert doc["vertices"] == 64 and doc["partial_cube"] and doc["bipartite"]
    assert (tmp_path / "fg.dot").read_text().count(" -- ") == doc["edges"]
    assert fail(4, "flipgraph", tmp_path / "g.pts", "--budget", 5)["code"]


def test_quadgraph_triangulate_stats(tmp_path, cache_dir, grid, hexagon):
    write_points(tmp_path / "g.pts", grid)
    doc = ok("quadgraph", tmp_path / "g.pts", "--dot", tmp_path / "qg.dot")
    assert doc["forest"] and doc["n_edges"] == 12
    assert 'label="0-4"' in (tmp_path / "qg.dot").read_text()
    doc = ok("triangulate", tmp_path / "g.pts", "-o", tmp_path / "g.tri")
    assert doc["n_edges"] == 16 and doc["delaunay"]
    assert ok("triangulate", tmp_path / "g.pts", "--edges", tmp_path / "g.tri")["delaunay"]
    st = ok("stats", tmp_path / "g.pts")
    assert st["pentagon_free"] and st["empty_quadrilaterals"] == 12 and st["diagonals"] == 28
    write_points(tmp_path / "h.pts", hexagon)
    fail(3, "quadgraph", tmp_path / "h.pts")
    assert ok("quadgraph", tmp_path / "h.pts", "--general")["n_edges"] == 15
    assert not ok("stats", tmp_path / "h.pts")["pentagon_free"]


def test_exit_codes(tmp_path, cache_dir):
    assert fail(2, "nonsense")["code"] == "usage"
    assert fail(2, "flipdist", "only-one-arg")["code"] == "usage"
    fail(2, "generate", "no-such-family")
    fail(3, "pentagon", tmp_path / "missing.pts")
    (tmp_path / "bad.pts").write_text("1 2\n1 2\n")
    fail(3, "pentagon", tmp_path / "bad.pts")
    (tmp_path / "line.pts").write_text("0 0\n1 1\n2 2\n")
    assert ok("triangulate", tmp_path / "line.pts")["n_edges"] == 2


def test_cache_hit_miss_and_corruption(tmp_path, cache_dir, grid):
    pts = tmp_path / "g.pts"
    write_points(pts, grid)
    first = call("stats", pts)
    entries = list(cache_dir.glob("*.json"))
    assert len(entries) == 1
    args = cli.build_parser().parse_args(["stats", str(pts)])
    res = cli.execute(args, cli.ResultCache(cache_dir))
    assert res.cached
    assert call("stats", pts) == first
    # corrupt entry: recomputed, identical output, entry rewritten
    entries[0].write_text("{ not json")
    assert call("stats", pts) == first
    assert json.loads(entries[0].read_text())["payload"]["output"]["n"] == 9
    # tampered payload fails the digest check
    entry = json.loads(entries[0].read_text())
    entry["payload"]["output"]["n"] = 99
    entries[0].write_text(json.dumps(entry))
    assert call("stats", pts) == first
    # modified input: new key
    write_points(pts, grid.__class__(grid.coords[:8]))
    assert json.loads(call("stats", pts)[1])["n"] == 8
    assert len(list(cache_dir.glob("*.json"))) == 2
    # --no-cache neither reads nor writes
    write_points(tmp_path / "h.pts", grid)
    call("--no-cache", "stats", tmp_path / "h.pts")
    assert len(list(cache_dir.glob("*.json"))) == 2


def test_output_is_deterministic(tmp_path, grid, monkeypatch):
    pts = tmp_path / "g.pts"
    write_points(pts, grid)
    runs = []
    for i in range(2):
        monkeypatch.setenv("FLIPCUBE_CACHE", str(tmp_path / f"c{i}"))
        runs.append((call("quadgraph", pts, "--dot", tmp_path / f"q{i}.dot"),
                     (tmp_path / f"q{i}.dot").read_text(),
                     call("flipgraph", pts, "--dot", tmp_path / f"f{i}.dot"),
                     (tmp_path / f"f{i}.dot").read_text()))
    assert runs[0] == runs[1]


def test_module_entry_point(tmp_path, grid):
    write_points(tmp_path / "g.pts", grid)
    r = subprocess.run([sys.executable, "-m", "flipcube", "--no-cache", "pentagon",
                        str(tmp_path / "g.pts")], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["empty_pentagon"] is None
    r = subprocess.run([sys.executable, "-m", "flipcube", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "flipdist" in r.stdout
