import pytest
from hypothesis import given, strategies as st

from catcube import fixtures
from catcube.complex import (
    CubeComplex,
    ScaleParams,
    ball,
    canonical_cube,
    check_npc,
    dump_complex,
    dump_simplicial,
    is_flag,
    load_complex,
    load_simplicial,
    vertex_link,
)
from catcube.errors import BadCubeShape, SchemaError, UnknownVertex

import oracles


def test_cube_counts():
    assert fixtures.cube(3).counts() == [8, 12, 6, 1]
    assert fixtures.square().counts() == [4, 4, 1]


def test_grid_counts():
    cx = fixtures.grid((4, 5))
    assert cx.counts() == [20, 31, 12]
    assert cx.basepoint == "2,2"


def test_grid_with_thin_axis_is_a_path():
    assert fixtures.grid((1, 4)).counts() == [4, 3]


@given(st.permutations(range(8)))
def test_canonical_cube_is_invariant_under_symmetries(labels):
    # relabel corners, then apply each of the 48 cube symmetries
    c = tuple(labels)
    base = canonical_cube(c)
    for flips in range(8):
        for order in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            img = []
            for b in range(8):
                bits = [(b >> i) & 1 for i in range(3)]
                bits = [bits[order[i]] ^ ((flips >> i) & 1) for i in range(3)]
                img.append(c[bits[0] | bits[1] << 1 | bits[2] << 2])
            assert canonical_cube(tuple(img)) == base


def test_bad_cube_shape():
    with pytest.raises(BadCubeShape):
        CubeComplex.from_cubes(["a", "b", "c"], [["a", "b", "c"]])


def test_unknown_vertex():
    with pytest.raises(SchemaError):
        CubeComplex.from_cubes(["a", "b"], [["a", "z"]])
    with pytest.raises(UnknownVertex):
        fixtures.square().vid("z")


def test_roundtrip_json():
    cx = fixtures.grid((3, 3))
    again = load_complex(dump_complex(cx))
    assert again.counts() == cx.counts()
    assert dump_complex(again) == dump_complex(cx)


def test_schema_error():
    with pytest.raises(SchemaError):
        load_complex('{"vertices": 3}')
    with pytest.raises(SchemaError):
        load_complex("not json")


def test_distances_match_networkx():
    cx = fixtures.grid((5, 4))
    d = cx.distances(cx.basepoint)
    ref = oracles.bfs_levels(cx, cx.basepoint)
    assert all(d[v] == ref[v] for v in range(cx.n_vertices))


def test_unreachable_distance():
    cx = CubeComplex.from_cubes(["a", "b", "c"], [["a", "b"]], basepoint="a")
    assert cx.distances("a").tolist() == [0, 1, -1]


def test_ball():
    cx = fixtures.grid((7, 7))
    b = ball(cx, "3,3", 2)
    # l1 ball of radius 2: 13 vertices, 16 edges, the 4 unit squares at the centre
    assert b.counts() == [13, 16, 4]
    assert b.distances("3,3").max() == 2


def test_scale_defaults_and_order():
    s = ScaleParams("e")
    assert (s.R0, s.R1, s.R) == (1, 2, 3)
    with pytest.raises(ValueError):
        ScaleParams("e", 3, 2, 4)


def test_simplicial_basics():
    p = fixtures.pentagon()
    assert p.f_vector() == [5, 5]
    assert p.euler_characteristic() == 0
    o = fixtures.octahedron()
    assert o.f_vector() == [6, 12, 8]
    assert o.euler_characteristic() == 2
    assert o.link("a").f_vector() == [4, 4]


def test_simplicial_roundtrip():
    o = fixtures.octahedron()
    assert load_simplicial(dump_simplicial(o)) == o


def test_flag():
    assert is_flag(fixtures.octahedron())[0]
    ok, witness = is_flag(fixtures.hollow_triangle())
    assert not ok and len(witness) == 3


def test_vertex_links_of_davis_ball_are_the_link(z3):
    link = vertex_link(z3, "e")
    assert link.f_vector() == fixtures.octahedron().f_vector()
    # the truncation cuts cubes near the rim, so only deep vertices qualify
    dist = z3.distances("e")
    deep = [v for v, d in zip(z3.vertices, dist) if d <= 3]
    assert check_npc(z3, deep).passed


def test_npc_fails_on_hollow_digon():
    assert not check_npc(fixtures.hollow_digon()).passed
