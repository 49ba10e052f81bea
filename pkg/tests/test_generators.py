import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from flipcube import generators as gen
from flipcube.errors import InvalidParamsError, MaskNotOnHullError
from flipcube.generators import (PENTAGON_FREE, Family, FamilySpec, clip_to_window, generate,
                                 kara_rows, kara_rows_by_index, lattice_hull_removed,
                                 named_fixtures)
from flipcube.geom import PointSet
from flipcube.quadgraph import count_empty_quadrilaterals, find_empty_pentagon

# parameter ranges small enough for the 5-subset oracle (n <= 13)
RANGES = {
    Family.LATTICE: [(w, h) for w in range(1, 5) for h in range(1, 5) if w * h <= 13],
    Family.TWO_LINES: [(a, b, p) for a in range(7) for b in range(7) for p in (0, 1)
                       if 1 <= a + b <= 13],
    Family.THREE_RAYS: [(k, ap) for k in range(1, 5) for ap in (0, 1)],
    Family.TWO_WEDGES: [(k, d) for k in range(3) for d in range(1, 4)],
    Family.WEDGE_SEGMENT: [(k, m, d) for k in range(4) for d in range(1, 4) for m in range(d + 1)
                           if 1 + 2 * k + 2 * m + 1 <= 13],
    Family.QUAD_SEGMENT: [(m,) for m in range(1, 10)],
    Family.LATTICE_HULL_REMOVED: [(3, 3, m) for m in (0, 2, 0b101000101, 0b110101011)]
                                 + [(4, 3, 0b100100001001)],
    Family.KARA_ROWS: [(0, 6), (0, 9), (3, 12), (-11, 0), (5, 13)],
}


def brute_pentagon_free(P):
    return not oracles.empty_kgons(P.coords, 5)


def test_every_pentagon_free_family_has_ranges():
    assert set(RANGES) == set(PENTAGON_FREE)


@pytest.mark.parametrize("family", sorted(RANGES, key=lambda f: f.value))
def test_families_are_pentagon_free(family):
    for params in RANGES[family]:
        P = generate(FamilySpec(family, params))
        assert len(P) <= 13, params
        assert brute_pentagon_free(P), (family, params)


def test_grid_example():
    P = generate(FamilySpec(Family.LATTICE, (3, 3)))
    assert P == named_fixtures()["grid3x3"]
    assert sorted(P.coords) == sorted((x, y) for x in range(3) for y in range(3))


def test_kara_rows_layout():
    pts = kara_rows_by_index(0, 3)
    rows = {}
    for x, y in pts:
        rows.setdefault(y, []).append(x)
    assert rows == {6: [0, 12, 24, 36], 3: [0, 3, 6, 9], 2: [0, 4, 8, 12], 0: [0, 6, 12, 18]}
    # cutting every row at the same index is not a convex window
    assert not brute_pentagon_free(PointSet(pts))
    strip = PointSet(kara_rows(0, 24))
    assert find_empty_pentagon(strip) is None
    assert {y for _, y in strip.coords} == {0, 2, 3, 6}


def test_convex_ngon_is_strictly_convex():
    P = generate(FamilySpec(Family.CONVEX_NGON, (6,)))
    assert len(oracles.hull_ccw(P.coords)) == 6
    assert find_empty_pentagon(P) is not None


def test_two_lines_quadrilateral_count():
    for k in range(1, 8):
        P = generate(FamilySpec(Family.TWO_LINES, (k, k, 1)))
        assert count_empty_quadrilaterals(P) == (k - 1) ** 2
        assert len(oracles.empty_kgons(P.coords, 4)) == (k - 1) ** 2


def test_lattice_hull_removed_examples():
    P = lattice_hull_removed(3, 3, [(1, 0)])
    assert len(P) == 8 and brute_pentagon_free(P)
    assert lattice_hull_removed(3, 3) == PointSet(gen.lattice(3, 3))
    ring = [(x, y) for x in range(4) for y in range(4)
            if (x in (0, 3) or y in (0, 3)) and (x, y) not in {(0, 0), (3, 0), (0, 3), (3, 3)}]
    Q = lattice_hull_removed(4, 4, ring)
    assert len(Q) == 8 and brute_pentagon_free(Q)
    with pytest.raises(MaskNotOnHullError):
        lattice_hull_removed(3, 3, [(1, 1)])
    with pytest.raises(InvalidParamsError):
        lattice_hull_removed(3, 3, 1 << 9)


def test_random_sets_are_reproducible_and_general():
    a = gen.random_general_position(9, 30, seed=4)
    assert a == gen.random_general_position(9, 30, seed=4)
    assert a != gen.random_general_position(9, 30, seed=5)
    from itertools import combinations

    for p, q, r in combinations(a, 3):
        assert oracles.orient(p, q, r) != 0
    for p, q, r, s in combinations(a, 4):
        assert oracles.circle_side(p, q, r, s) != 0
    P = generate(FamilySpec(Family.RANDOM_GENERAL_POSITION, (9, 30), seed=4))
    assert list(P.coords) == a


def test_invalid_params():
    with pytest.raises(InvalidParamsError):
        generate(FamilySpec(Family.LATTICE, (0, 3)))
    with pytest.raises(InvalidParamsError):
        generate(FamilySpec(Family.LATTICE, (3, 3, 3)))
    with pytest.raises(InvalidParamsError):
        generate(FamilySpec(Family.WEDGE_SEGMENT, (2, 5, 1)))
    with pytest.raises(InvalidParamsError):
        gen.random_general_position(10, 2)
    with pytest.raises(ValueError):
        Family("no-such-family")


def test_generator_self_test_rejects_pentagons(monkeypatch):
    monkeypatch.setitem(gen._BUILDERS, Family.THREE_RAYS, lambda k, apex: gen.convex_ngon(6))
    with pytest.raises(InvalidParamsError):
        generate(FamilySpec(Family.THREE_RAYS))


@given(st.sampled_from(sorted(RANGES, key=lambda f: f.value)), st.data())
def test_convex_windows_preserve_pentagon_freeness(family, data):
    params = data.draw(st.sampled_from(RANGES[family]))
    P = generate(FamilySpec(family, params))
    xs, ys = P.xs, P.ys
    window = data.draw(st.lists(
        st.tuples(st.integers(min(xs) - 2, max(xs) + 2), st.integers(min(ys) - 2, max(ys) + 2)),
        min_size=3, max_size=6))
    if len(oracles.hull_ccw(window)) < 3:
        return
    Q = clip_to_window(P, window)
    hull = oracles.hull_ccw(window)
    assert set(Q.coords) == {p for p in P.coords if oracles.in_convex_hull_closed(p, hull)}
    assert brute_pentagon_free(Q)
    W = generate(FamilySpec(family, params, window=tuple(window)))
    assert W == Q


def test_named_fixtures():
    fx = named_fixtures()
    assert set(fx) >= {"grid3x3", "hexagon", "pentagon", "square", "two_lines_5_5",
                       "dilation_free"}
    assert len(fx["dilation_free"]) == 6
    assert oracles.empty_kgons(fx["dilation_free"].coords, 4) == []
