import json
import random
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from catcube import fixtures
from catcube.complex import ScaleParams
from catcube.errors import (
    DisconnectedHorizon,
    DomainTooSmall,
    InvalidGrid,
    NoHorizonCycle,
    NotAdmissible,
    OutOfDomain,
    OverlappingConnectors,
    SchemaError,
)
from catcube.grid import (
    Connector,
    Grid,
    add_grids,
    assemble_cocycle,
    check_admissible,
    connector_census,
    connector_type,
    cycle_grids,
    delta_parity,
    far_part,
    horizon,
    hyperplane_grids,
    load_grid,
    orient_hyperplane,
    orientation_system,
    solve_parity,
    typed_components,
    validate_grid,
    verify_cocycle,
    zero_cocycle,
)
from catcube.gf2 import kernel_basis
from catcube.hyperplanes import halfspaces, hyperplanes, intersection_components

import oracles
from conftest import davis

Z3_SCALE = ScaleParams("e", 1, 2, 3)


def class_sets(cx, h):
    return {frozenset(cx.edges[e]) for e in hyperplanes(cx)[h].edges}


def test_horizons_match_oracle(z3):
    dist = z3.distances("e")
    for hp in hyperplanes(z3):
        if not far_part(z3, hp.id, "e", 2).n:
            continue
        ref = oracles.horizon_squares(z3, class_sets(z3, hp.id), dist, 2)
        try:
            hz = horizon(z3, hp.id, Z3_SCALE)
        except NoHorizonCycle:
            assert not ref
            continue
        ours = {frozenset(z3.squares[s]) for s in hz.squares}
        assert ours == ref
        # consecutive class edges are the two class sides of the square between them
        for i, s in enumerate(hz.squares):
            a, b = hz.vertices[i], hz.vertices[(i + 1) % len(hz)]
            assert set(z3.edges[a]) | set(z3.edges[b]) == set(z3.squares[s])


def test_horizon_walk_changes_sides_evenly(z3):
    # walking a horizon, the side of k changes exactly at squares dual to k
    census = connector_census(z3, Z3_SCALE)
    for rec in census.pairs:
        h, k = rec["pair"]
        for first, other in ((h, k), (k, h)):
            hz = horizon(z3, first, Z3_SCALE)
            hs = halfspaces(z3, other)
            sides = [hs.side_of(z3.edges[e][0]) for e in hz.vertices]
            changes = sum(sides[i] != sides[(i + 1) % len(sides)] for i in range(len(sides)))
            comps = intersection_components(z3, h, k, Z3_SCALE)
            in_bodies = sum(s in set(c.squares) for c in comps for s in hz.squares)
            assert changes == in_bodies
            assert changes % 2 == 0
        assert sum(t[0] for t in rec["types"]) % 2 == 0
        assert sum(t[1] for t in rec["types"]) % 2 == 0


def test_z3_census(z3):
    c = connector_census(z3, Z3_SCALE)
    assert c.histogram[(1, 0)] == 0 and c.histogram[(0, 1)] == 0
    assert c.histogram[(0, 0)] > 0 and c.histogram[(1, 1)] > 0
    # hyperplanes lying wholly beyond the rim level have no horizon
    dist = z3.distances("e")
    for f in c.failures:
        assert any(not oracles.horizon_squares(z3, class_sets(z3, h), dist, 2) for h in f["pair"])
    assert set(json.loads(json.dumps(c.to_dict()))["histogram"]) == {"0,0", "0,1", "1,0", "1,1"}


def census_against_oracle(cx, scale):
    ours = connector_census(cx, scale)
    typed, without = oracles.census(cx, cx.distances(scale.x0), scale.R0, scale.R1)
    key = {hp.id: frozenset(frozenset(cx.edges[e]) for e in hp.edges) for hp in hyperplanes(cx)}
    assert {frozenset(key[x] for x in f["pair"]) for f in ours.failures} == without
    assert len(ours.pairs) == len(typed)
    hist = {t: 0 for t in ours.histogram}
    for rec in ours.pairs:
        h, k = rec["pair"]
        ref = typed[frozenset((key[h], key[k]))]
        assert sorted(map(tuple, rec["types"])) == sorted(zip(ref[key[h]], ref[key[k]]))
        for t in rec["types"]:
            hist[tuple(t)] += 1
    assert {tuple(t): n for t, n in ours.histogram.items()} == hist
    return ours


def test_census_matches_oracle_z3(z3):
    census_against_oracle(z3, Z3_SCALE)


@pytest.mark.parametrize("link, radius, R0, R1", [
    ("pentagon", 3, 0, 1),
    ("pentagon-suspension", 5, 0, 1),
    ("pentagon-suspension", 6, 1, 2),
    ("torus", 3, 0, 0),
])
def test_census_matches_oracle(link, radius, R0, R1):
    cx = davis(link, radius)
    c = census_against_oracle(cx, ScaleParams(cx.basepoint, R0, R1))
    assert json.dumps(c.to_dict(), sort_keys=True) == json.dumps(connector_census(cx, ScaleParams(cx.basepoint, R0, R1)).to_dict(), sort_keys=True)


def test_no_horizon_on_a_square():
    cx = fixtures.square()
    with pytest.raises(NoHorizonCycle):
        horizon(cx, 0, ScaleParams("00", 0, 0))


def random_families(cx, scale, rng, n=60):
    typed = typed_components(cx, scale)
    by_h = {}
    for (a, b), items in typed.items():
        for i, t in items:
            by_h.setdefault(a, []).append((Connector((a, b), (i,)), t.type_h))
            by_h.setdefault(b, []).append((Connector((b, a), (i,)), t.type_k))
    out = []
    for h, cs in sorted(by_h.items()):
        for _ in range(max(1, n // len(by_h))):
            pick = rng.sample(cs, rng.randint(0, min(4, len(cs))))
            out.append((h, [c for c, _ in pick], sum(t for _, t in pick) % 2))
    return out


def test_orientation_satisfies_flip_equations(z3):
    rng = random.Random(3)
    for h, fam, parity in random_families(z3, Z3_SCALE, rng):
        if parity:
            with pytest.raises(NotAdmissible) as exc:
                orient_hyperplane(z3, h, fam, Z3_SCALE)
            assert exc.value.certificate
            continue
        o, oc = orient_hyperplane(z3, h, fam, Z3_SCALE, strict=True)
        assert (o.values ^ oc.values).all()
        val = {frozenset(z3.edges[e]): b for e, b in o.as_dict().items()}
        flip_sets = {frozenset(z3.squares[s]) for c in fam for i in c.components
                     for s in intersection_components(z3, *c.pair, Z3_SCALE)[i].squares}
        for sq in z3.squares:
            sides = [frozenset(p) for p in combinations(sq, 2) if frozenset(p) in val]
            if len(sides) == 2:
                assert (val[sides[0]] ^ val[sides[1]]) == (frozenset(sq) in flip_sets)


def test_kernel_is_one_dimensional(z3):
    for hp in hyperplanes(z3)[:10]:
        if not far_part(z3, hp.id, "e", 2).n:
            continue
        system, fp = orientation_system(z3, hp.id, (), Z3_SCALE)
        assert fp.components()[0] == 1
        assert len(kernel_basis(system)) == 1


def test_disconnected_far_part_is_reported():
    # a long path: removing the ball splits every far part of a tree hyperplane
    cx = fixtures.grid((9, 2))
    scale = ScaleParams("4,0", 0, 1)
    h = next(hp.id for hp in hyperplanes(cx) if far_part(cx, hp.id, "4,0", 1).n
             and far_part(cx, hp.id, "4,0", 1).components()[0] > 1)
    o, _ = orient_hyperplane(cx, h, (), scale)
    assert o.n_components > 1
    with pytest.raises(DisconnectedHorizon):
        orient_hyperplane(cx, h, (), scale, strict=True)


def test_domain_too_small():
    cx = fixtures.square()
    with pytest.raises(DomainTooSmall):
        orient_hyperplane(cx, 0, (), ScaleParams("00", 1, 1))


def test_cocycles_verify_and_parity_solves(z3):
    dist = z3.distances("e")
    grids = hyperplane_grids(z3, Z3_SCALE)[:8] + cycle_grids(z3, Z3_SCALE, limit=8)
    assert grids
    for g in grids:
        validate_grid(z3, g)
        alpha = assemble_cocycle(z3, g)
        assert verify_cocycle(z3, alpha) == []
        deep = [s for s in oracles.square_sums(z3, alpha.values) if all(dist[v] > 2 for v in z3.squares[s])]
        assert deep == []
        pi = solve_parity(z3, alpha, Z3_SCALE)
        keep = [v for v in range(z3.n_vertices) if dist[v] > 3]
        ref = oracles.two_colour(
            keep, [(u, v, int(alpha.values[e])) for e, (u, v) in enumerate(z3.edges) if dist[u] > 3 and dist[v] > 3]
        )
        assert ref is not None
        assert all(pi.values[v] == ref[v] for v in keep)


def test_hyperplane_grid_parity_is_the_halfspace(z3):
    # with the complement seed, one hyperplane's parity reads off its halfspaces
    for g in hyperplane_grids(z3, Z3_SCALE)[:6]:
        (h,) = g.hyperplanes
        pi = solve_parity(z3, assemble_cocycle(z3, g), Z3_SCALE)
        hs = halfspaces(z3, h)
        deep = [v for v in range(z3.n_vertices) if pi.values[v] >= 0]
        x = deep[0]
        for y in deep:
            same = hs.side_of(x) == hs.side_of(y)
            assert delta_parity(pi, z3.vertices[x], z3.vertices[y]) == (0 if same else 1)


def test_parity_failure_certificate(z3):
    alpha = zero_cocycle(z3, Z3_SCALE)
    vals = alpha.values.copy()
    dom = np.flatnonzero(alpha.domain)
    vals[dom[0]] = 1  # a single flipped edge is never a coboundary on a cycle
    bad = type(alpha)(vals, alpha.domain, alpha.x0, alpha.radius)
    out = solve_parity(z3, bad, ScaleParams("e", 1, 2, 2))
    assert hasattr(out, "edges")
    assert sum(int(vals[e]) for e in out.edges) % 2 == 1
    g = nx.Graph([z3.edges[e] for e in out.edges])
    assert all(d % 2 == 0 for _, d in g.degree())


def test_parity_out_of_domain(z3):
    pi = solve_parity(z3, zero_cocycle(z3, Z3_SCALE), Z3_SCALE)
    with pytest.raises(OutOfDomain):
        pi["e"]
    with pytest.raises(OutOfDomain):
        pi["nope"]


def test_additivity(z3):
    grids = hyperplane_grids(z3, Z3_SCALE)[:6] + cycle_grids(z3, Z3_SCALE, limit=6)
    for g1, g2 in combinations(grids, 2):
        try:
            s = add_grids(g1, g2)
        except OverlappingConnectors:
            continue
        a = assemble_cocycle(z3, g1) + assemble_cocycle(z3, g2)
        b = assemble_cocycle(z3, s)
        dom = a.domain & b.domain
        assert ((a.values ^ b.values) & dom).sum() == 0


def test_add_grid_with_itself_cancels(z3):
    g = cycle_grids(z3, Z3_SCALE, limit=1)[0]
    s = add_grids(g, g)
    assert s.connectors == ()
    alpha = assemble_cocycle(z3, s)
    assert not alpha.values.any()


def test_overlapping_connectors(z3):
    typed = typed_components(z3, Z3_SCALE)
    pair, items = next((p, it) for p, it in typed.items() if len(it) >= 2)
    g1 = Grid(pair, [Connector(pair, (0,))], Z3_SCALE)
    g2 = Grid(pair, [Connector(pair, (0, 1))], Z3_SCALE)
    with pytest.raises(OverlappingConnectors):
        add_grids(g1, g2)


def test_validate_grid_errors(z3):
    with pytest.raises(InvalidGrid):
        validate_grid(z3, Grid((10_000,), (), Z3_SCALE))
    pair = next(iter(typed_components(z3, Z3_SCALE)))
    with pytest.raises(InvalidGrid):
        validate_grid(z3, Grid((pair[0],), [Connector(pair, (0,))], Z3_SCALE))
    with pytest.raises(InvalidGrid):
        validate_grid(z3, Grid(pair, [Connector(pair, (99,))], Z3_SCALE))
    with pytest.raises(InvalidGrid):
        Connector((3, 3), (0,))
    # a single (1, 1) connector is not admissible on either hyperplane
    p, i = next((p, i) for p, it in typed_components(z3, Z3_SCALE).items() for i, t in it if t == (1, 1))
    c = Connector(p, (i,))
    assert connector_type(z3, c, Z3_SCALE) == (1, 1)
    assert not check_admissible(z3, p[0], [c], Z3_SCALE)
    with pytest.raises(NotAdmissible):
        validate_grid(z3, Grid(p, [c], Z3_SCALE))


def test_grid_json_roundtrip(z3):
    g = cycle_grids(z3, Z3_SCALE, limit=1)[0]
    again = load_grid(json.dumps(g.to_dict()))
    assert again == g
    with pytest.raises(SchemaError):
        load_grid('{"hyperplanes": []}')
    with pytest.raises(SchemaError):
        load_grid('{"hyperplanes": [], "connectors": [], "scale": {"x0": "e", "R0": 3, "R1": 1}}')


def test_cycle_grids_are_cycles(z3):
    for g in cycle_grids(z3, Z3_SCALE, limit=10):
        assert len(g.hyperplanes) == 3
        gr = nx.Graph(c.pair for c in g.connectors)
        assert nx.is_isomorphic(gr, nx.cycle_graph(3))
        assert all(connector_type(z3, c, Z3_SCALE) == (1, 1) for c in g.connectors)
