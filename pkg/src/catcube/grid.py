"""Connectors, grids, orientations, the grid cocycle and its parity function.

Everything lives on a finite ball around a basepoint ``x0`` with three
radii ``R0 <= R1 <= R``:

* connector bodies are intersection components made of squares whose
  vertices all lie farther than ``R0`` from ``x0``;
* a hyperplane is oriented on its *far part*, the class edges whose two
  endpoints are both farther than ``R1``;
* the parity function lives on vertices farther than ``R``.

The level of a class edge is the distance of its nearer endpoint.  The
horizon of a hyperplane is the inner rim of its far part: the far edges of
the hyperplane complex that bound exactly one far square and touch level
``R1 + 1``.  It has to be a single cycle; connector types count horizon
crossings.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

import jsonschema
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import gf2
from .complex import SCHEMA_VERSION, CubeComplex, ScaleParams
from .errors import (
    DisconnectedHorizon,
    DomainTooSmall,
    InvalidGrid,
    NoHorizonCycle,
    NotAdmissible,
    OutOfDomain,
    OverlappingConnectors,
    SchemaError,
)
from .hyperplanes import _midcube, crossing_graph, intersection_components, structure


class TypePair(NamedTuple):
    type_h: int
    type_k: int


@dataclass(frozen=True)
class Connector:
    """A union of intersection components of ``pair[0]`` and ``pair[1]``.

    ``components`` index into ``intersection_components(cx, h, k, scale)``.
    """

    pair: tuple[int, int]
    components: tuple[int, ...]

    def __post_init__(self) -> None:
        h, k = self.pair
        if h == k:
            raise InvalidGrid(f"connector pair ({h}, {k}) repeats a hyperplane")
        if not self.components:
            raise InvalidGrid("connector body is empty")
        object.__setattr__(self, "pair", (int(h), int(k)))
        object.__setattr__(self, "components", tuple(sorted(set(int(c) for c in self.components))))

    @property
    def key(self) -> tuple[int, int]:
        return (min(self.pair), max(self.pair))

    def disjoint(self, other: "Connector") -> bool:
        return self.key != other.key or not set(self.components) & set(other.components)

    def same_body(self, other: "Connector") -> bool:
        return self.key == other.key and self.components == other.components

    def to_dict(self) -> dict[str, Any]:
        return {"pair": list(self.pair), "components": list(self.components)}


@dataclass(frozen=True)
class Grid:
    hyperplanes: tuple[int, ...]
    connectors: tuple[Connector, ...]
    scale: ScaleParams
    orientation_seed: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "hyperplanes", tuple(sorted(set(int(h) for h in self.hyperplanes))))
        object.__setattr__(
            self, "connectors", tuple(sorted(self.connectors, key=lambda c: (c.key, c.components, c.pair)))
        )
        seeds = {int(h): int(s) & 1 for h, s in dict(self.orientation_seed).items() if int(s) & 1}
        object.__setattr__(self, "orientation_seed", seeds)

    def seed(self, h: int) -> int:
        return self.orientation_seed.get(h, 0)

    def on(self, h: int) -> list[Connector]:
        """Connectors supported on ``h``."""
        return [c for c in self.connectors if h in c.pair]

    def to_dict(self) -> dict[str, Any]:
        return {
            "hyperplanes": list(self.hyperplanes),
            "connectors": [c.to_dict() for c in self.connectors],
            "scale": self.scale.to_dict(),
            "orientation_seed": {str(h): s for h, s in sorted(self.orientation_seed.items())},
        }


GRID_SCHEMA = {
    "type": "object",
    "required": ["hyperplanes", "connectors", "scale"],
    "properties": {
        "hyperplanes": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "connectors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pair", "components"],
                "properties": {
                    "pair": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                    "components": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                },
            },
        },
        "scale": {
            "type": "object",
            "required": ["x0"],
            "properties": {
                "x0": {"type": "string"},
                "R0": {"type": "integer", "minimum": 0},
                "R1": {"type": "integer", "minimum": 0},
                "R": {"type": "integer", "minimum": 0},
            },
        },
        "orientation_seed": {
            "type": "object",
            "additionalProperties": {"type": "integer", "enum": [0, 1]},
        },
    },
}


def load_grid(document: str | bytes | Mapping[str, Any]) -> Grid:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"grid is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(document, GRID_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"grid: {exc.message}") from None
    sc = document["scale"]
    try:
        scale = ScaleParams(sc["x0"], sc.get("R0", 1), sc.get("R1"), sc.get("R"))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    return Grid(
        document["hyperplanes"],
        [Connector(tuple(c["pair"]), tuple(c["components"])) for c in document["connectors"]],
        scale,
        {int(h): s for h, s in document.get("orientation_seed", {}).items()},
    )


# ---------------------------------------------------------------------------
# far parts and horizons


class _FarPart:
    """The far part of one hyperplane at one radius, as a graph with squares."""

    def __init__(self, cx: CubeComplex, h: int, x0: str, R1: int):
        st = structure(cx)
        hp = st.hyperplanes[h]
        dist = cx.distances(x0)
        ends = np.array([cx.edges[e] for e in hp.edges], dtype=np.int64).reshape(-1, 2)
        level = np.minimum(dist[ends[:, 0]], dist[ends[:, 1]])
        local = {e: i for i, e in enumerate(hp.edges)}
        far_mask = level > R1
        self.h = h
        self.R1 = R1
        self.class_edges = np.array(hp.edges, dtype=np.int64)
        self.level = level
        # far vertices, renumbered 0.. in class-edge order
        self.far = np.flatnonzero(far_mask)
        pos = {int(i): j for j, i in enumerate(self.far.tolist())}
        self.pos = pos
        edges: list[tuple[int, int]] = []
        squares: list[int] = []
        for s in hp.carrier:
            axis = 0 if st.edge_h[cx.square_edges[s, 0]] == h else 1
            i, j = _midcube(cx, cx.squares[s], axis, local)
            if i in pos and j in pos:
                a, b = sorted((pos[i], pos[j]))
                edges.append((a, b))
                squares.append(s)
        self.edges = edges
        self.edge_square = squares
        eid = {e: n for n, e in enumerate(edges)}
        faces = []
        for d, c, axis in st.h_cubes().get(h, ()):
            if d != 3:
                continue
            mid = _midcube(cx, cx.cubes(3)[c], axis, local)
            if all(m in pos for m in mid):
                a, b, c2, d2 = (pos[m] for m in mid)
                faces.append(
                    (eid[_pair(a, b)], eid[_pair(c2, d2)], eid[_pair(a, c2)], eid[_pair(b, d2)])
                )
        self.faces = faces

    @property
    def n(self) -> int:
        return len(self.far)

    def components(self) -> tuple[int, np.ndarray]:
        n = self.n
        e = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        g = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        return connected_components(g, directed=False)


def _pair(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def far_part(cx: CubeComplex, h: int, x0: str, R1: int) -> _FarPart:
    key = ("far", h, x0, R1)
    fp = cx._cache.get(key)
    if fp is None:
        fp = _FarPart(cx, h, x0, R1)
        cx._cache[key] = fp
    return fp


@dataclass(frozen=True)
class Horizon:
    """A horizon cycle: class edges in cyclic order and the carrier square
    between consecutive ones (``squares[i]`` joins ``vertices[i]`` to
    ``vertices[i + 1]``)."""

    hyperplane: int
    vertices: tuple[int, ...]
    squares: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.squares)


def horizon(cx: CubeComplex, h: int, scale: ScaleParams) -> Horizon:
    key = ("horizon", h, scale.x0, scale.R1)
    hz = cx._cache.get(key)
    if hz is None:
        hz = _horizon(cx, h, scale)
        cx._cache[key] = hz
    if isinstance(hz, NoHorizonCycle):
        raise NoHorizonCycle(str(hz))
    return hz


def _horizon(cx: CubeComplex, h: int, scale: ScaleParams) -> Horizon | NoHorizonCycle:
    fp = far_part(cx, h, scale.x0, scale.R1)
    uses = Counter(e for f in fp.faces for e in f)
    rim_level = scale.R1 + 1
    lv = fp.level[fp.far]
    rim = [
        n
        for n, (a, b) in enumerate(fp.edges)
        if uses[n] == 1 and (lv[a] == rim_level or lv[b] == rim_level)
    ]
    if not rim:
        return NoHorizonCycle(f"hyperplane {h}: no horizon edges at radius {scale.R1}")
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for n in rim:
        a, b = fp.edges[n]
        adj[a].append((b, n))
        adj[b].append((a, n))
    odd = [v for v, nb in adj.items() if len(nb) != 2]
    if odd:
        return NoHorizonCycle(
            f"hyperplane {h}: horizon vertex {int(fp.class_edges[fp.far[min(odd)]])} has degree {len(adj[min(odd)])}"
        )
    start = min(adj)
    cur, first = min(adj[start])
    order, squares = [start], [first]
    while cur != start:
        order.append(cur)
        cur, n = next(x for x in adj[cur] if x[1] != squares[-1])
        squares.append(n)
    if len(order) != len(adj):
        return NoHorizonCycle(f"hyperplane {h}: horizon has more than one cycle")
    return Horizon(
        h,
        tuple(int(fp.class_edges[fp.far[v]]) for v in order),
        tuple(int(fp.edge_square[n]) for n in squares),
    )


# ---------------------------------------------------------------------------
# connectors and types


def connector_body(cx: CubeComplex, c: Connector, scale: ScaleParams) -> frozenset[int]:
    comps = intersection_components(cx, c.pair[0], c.pair[1], scale)
    body: set[int] = set()
    for i in c.components:
        if i >= len(comps):
            raise InvalidGrid(f"connector {c.pair} has no component {i} (found {len(comps)})")
        body.update(comps[i].squares)
    return frozenset(body)


def horizon_type(cx: CubeComplex, h: int, body: Iterable[int], scale: ScaleParams) -> int:
    """Parity of the horizon crossings of ``h`` that lie in ``body``."""
    body = set(body)
    return sum(s in body for s in horizon(cx, h, scale).squares) & 1


def connector_type(cx: CubeComplex, c: Connector, scale: ScaleParams) -> TypePair:
    body = connector_body(cx, c, scale)
    h, k = c.pair
    return TypePair(horizon_type(cx, h, body, scale), horizon_type(cx, k, body, scale))


def check_admissible(cx: CubeComplex, h: int, connectors: Sequence[Connector], scale: ScaleParams) -> bool:
    total = 0
    for c in connectors:
        if h not in c.pair:
            raise InvalidGrid(f"connector {c.pair} is not supported on hyperplane {h}")
        total ^= horizon_type(cx, h, connector_body(cx, c, scale), scale)
    return total == 0


def validate_grid(cx: CubeComplex, grid: Grid) -> None:
    """Raise unless the grid's connectors are supported on its hyperplanes,
    pairwise disjoint and admissible on every hyperplane."""
    n_h = len(structure(cx).hyperplanes)
    hs = set(grid.hyperplanes)
    for h in hs:
        if h >= n_h:
            raise InvalidGrid(f"no hyperplane {h} (complex has {n_h})")
    for c in grid.connectors:
        if not set(c.pair) <= hs:
            raise InvalidGrid(f"connector {c.pair} is supported off the grid hyperplanes")
        connector_body(cx, c, grid.scale)
    for a, b in combinations(grid.connectors, 2):
        if not a.disjoint(b):
            raise InvalidGrid(f"connectors {a.to_dict()} and {b.to_dict()} overlap")
    for h in grid.hyperplanes:
        fam = grid.on(h)
        if fam and not check_admissible(cx, h, fam, grid.scale):
            raise NotAdmissible(f"connector types on hyperplane {h} sum to 1")


# ---------------------------------------------------------------------------
# orientations


@dataclass(frozen=True)
class Orientation:
    """Values on the far class edges of one hyperplane (``edges`` are ambient ids)."""

    hyperplane: int
    edges: tuple[int, ...]
    values: np.ndarray
    n_components: int

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    def complement(self) -> "Orientation":
        return Orientation(self.hyperplane, self.edges, (1 - self.values).astype(np.uint8), self.n_components)

    def __add__(self, other: "Orientation") -> "Orientation":
        if self.hyperplane != other.hyperplane or self.edges != other.edges:
            raise ValueError("orientations of different hyperplanes or domains")
        return Orientation(self.hyperplane, self.edges, self.values ^ other.values, self.n_components)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.edges, self.values.tolist()))


def orientation_system(
    cx: CubeComplex, h: int, connectors: Sequence[Connector], scale: ScaleParams
) -> tuple[gf2.Gf2System, _FarPart]:
    """Flip equations on the far part: one row per far carrier square."""
    fp = far_part(cx, h, scale.x0, scale.R1)
    flips: set[int] = set()
    for c in connectors:
        if h not in c.pair:
            raise InvalidGrid(f"connector {c.pair} is not supported on hyperplane {h}")
        flips |= connector_body(cx, c, scale)
    rhs = [1 if s in flips else 0 for s in fp.edge_square]
    return gf2.Gf2System.from_pairs(fp.n, fp.edges, rhs), fp


def orient_hyperplane(
    cx: CubeComplex,
    h: int,
    connectors: Sequence[Connector],
    scale: ScaleParams,
    strict: bool = False,
) -> tuple[Orientation, Orientation]:
    """The canonical orientation (0 on the least far edge of each component)
    and its complement.

    With several far components there are more than two orientations; the
    canonical one is still returned unless ``strict`` is set, in which case
    :class:`DisconnectedHorizon` is raised.
    """
    system, fp = orientation_system(cx, h, connectors, scale)
    if fp.n == 0:
        raise DomainTooSmall(f"hyperplane {h} has no edges beyond radius {scale.R1}")
    out = gf2.solve(system)
    if isinstance(out, gf2.Inconsistency):
        squares = [int(fp.edge_square[i]) for i in out.rows]
        raise NotAdmissible(
            f"flip equations on hyperplane {h} are inconsistent around squares {squares}",
            certificate=squares,
        )
    n_comp, labels = fp.components()
    if strict and n_comp > 1:
        raise DisconnectedHorizon(f"hyperplane {h}: far part has {n_comp} components")
    x = out.x.copy()
    first = {}
    for v, lab in enumerate(labels.tolist()):
        first.setdefault(lab, v)
    flip = np.array([x[first[lab]] for lab in range(n_comp)], dtype=np.uint8)
    x ^= flip[labels]
    edges = tuple(int(e) for e in fp.class_edges[fp.far])
    o = Orientation(h, edges, x.astype(np.uint8), n_comp)
    return o, o.complement()


def grid_orientations(cx: CubeComplex, grid: Grid) -> dict[int, Orientation]:
    out = {}
    for h in grid.hyperplanes:
        pair = orient_hyperplane(cx, h, grid.on(h), grid.scale)
        out[h] = pair[grid.seed(h)]
    return out


# ---------------------------------------------------------------------------
# cocycles


@dataclass(frozen=True)
class EdgeCocycle:
    """Z/2 values on all edges; ``domain`` marks edges with both ends beyond ``radius``."""

    values: np.ndarray
    domain: np.ndarray
    x0: str
    radius: int

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    def __add__(self, other: "EdgeCocycle") -> "EdgeCocycle":
        if self.x0 != other.x0:
            raise ValueError("cocycles based at different points")
        dom = self.domain & other.domain
        return EdgeCocycle((self.values ^ other.values) & dom, dom, self.x0, max(self.radius, other.radius))

    def to_dict(self, cx: CubeComplex) -> dict[str, Any]:
        names = cx.vertices
        return {
            "schema_version": SCHEMA_VERSION,
            "x0": self.x0,
            "radius": self.radius,
            "cocycle": {
                f"{names[u]}|{names[v]}": int(self.values[e])
                for e, (u, v) in enumerate(cx.edges)
                if self.domain[e]
            },
        }


def edge_domain(cx: CubeComplex, x0: str, radius: int) -> np.ndarray:
    """Edges with both endpoints farther than ``radius`` (read-only, cached)."""
    key = ("edge_domain", x0, radius)
    dom = cx._cache.get(key)
    if dom is None:
        dist = cx.distances(x0)
        e = np.array(cx.edges, dtype=np.int64).reshape(-1, 2)
        dom = (dist[e[:, 0]] > radius) & (dist[e[:, 1]] > radius)
        dom.setflags(write=False)
        cx._cache[key] = dom
    return dom


def zero_cocycle(cx: CubeComplex, scale: ScaleParams) -> EdgeCocycle:
    dom = edge_domain(cx, scale.x0, scale.R1)
    return EdgeCocycle(np.zeros(len(cx.edges), dtype=np.uint8), dom, scale.x0, scale.R1)


def assemble_cocycle(
    cx: CubeComplex, grid: Grid, orientations: Mapping[int, Orientation] | None = None
) -> EdgeCocycle:
    """Sum of the hyperplane orientations, each spread over its far class edges."""
    if orientations is None:
        orientations = grid_orientations(cx, grid)
    alpha = np.zeros(len(cx.edges), dtype=np.uint8)
    for h in grid.hyperplanes:
        o = orientations[h]
        if not o.edges:
            raise DomainTooSmall(f"hyperplane {h} has no edges beyond radius {grid.scale.R1}")
        alpha[list(o.edges)] ^= o.values
    dom = edge_domain(cx, grid.scale.x0, grid.scale.R1)
    return EdgeCocycle(alpha & dom, dom, grid.scale.x0, grid.scale.R1)


def verify_cocycle(cx: CubeComplex, alpha: EdgeCocycle) -> list[int]:
    """Squares beyond the cocycle's radius whose four edge values sum to 1."""
    if not len(cx.squares):
        return []
    dist = cx.distances(alpha.x0)
    sq = np.array(cx.squares, dtype=np.int64)
    inside = (dist[sq] > alpha.radius).all(axis=1)
    sums = alpha.values[cx.square_edges].sum(axis=1) & 1
    return np.flatnonzero(inside & (sums == 1)).tolist()


# ---------------------------------------------------------------------------
# parity


@dataclass(frozen=True)
class ParityFunction:
    """``values[v]`` for vertices beyond ``radius``; -1 elsewhere."""

    names: tuple[str, ...]
    values: np.ndarray
    radius: int
    n_components: int
    cocycle: EdgeCocycle
    index: Mapping[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        self.values.setflags(write=False)
        if not self.index:
            object.__setattr__(self, "index", {v: i for i, v in enumerate(self.names)})

    def __getitem__(self, v: str) -> int:
        i = self.index.get(v)
        if i is None:
            raise OutOfDomain(f"{v!r} is not a vertex")
        val = int(self.values[i])
        if val < 0:
            raise OutOfDomain(f"{v!r} is within radius {self.radius}")
        return val

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "radius": self.radius,
            "components": self.n_components,
            "parity": {self.names[i]: int(b) for i, b in enumerate(self.values.tolist()) if b >= 0},
        }


@dataclass(frozen=True)
class CoboundaryObstruction:
    """Domain edges forming a cycle on which the cocycle sums to 1."""

    edges: tuple[int, ...]

    def to_dict(self, cx: CubeComplex) -> dict[str, Any]:
        n = cx.vertices
        return {"certificate": [[n[cx.edges[e][0]], n[cx.edges[e][1]]] for e in self.edges]}


def solve_parity(cx: CubeComplex, alpha: EdgeCocycle, scale: ScaleParams) -> ParityFunction | CoboundaryObstruction:
    """Solve ``pi(u) + pi(v) = alpha(uv)`` on edges with both ends beyond ``R``.

    ``pi`` is 0 at the least vertex of each component of the truncated graph.
    """
    if scale.x0 != alpha.x0:
        raise ValueError("scale and cocycle use different basepoints")
    if scale.R < alpha.radius:
        raise ValueError(f"parity radius {scale.R} is below the cocycle radius {alpha.radius}")
    dist = cx.distances(scale.x0)
    keep = np.flatnonzero(dist > scale.R)
    pos = np.full(cx.n_vertices, -1, dtype=np.int64)
    pos[keep] = np.arange(len(keep))
    dom = edge_domain(cx, scale.x0, scale.R)
    eids = np.flatnonzero(dom)
    ends = np.array(cx.edges, dtype=np.int64).reshape(-1, 2)[eids]
    rows = pos[ends]
    system = gf2.Gf2System.from_pairs(len(keep), rows, alpha.values[eids])
    out = gf2.solve(system)
    if isinstance(out, gf2.Inconsistency):
        return CoboundaryObstruction(tuple(int(eids[i]) for i in out.rows))
    n = len(keep)
    e = rows.reshape(-1, 2)
    n_comp, labels = connected_components(
        coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n)), directed=False
    )
    x = out.x.copy()
    first = {}
    for v, lab in enumerate(labels.tolist()):
        first.setdefault(lab, v)
    flip = np.array([x[first[lab]] for lab in range(n_comp)], dtype=np.uint8)
    if n:
        x ^= flip[labels]
    values = np.full(cx.n_vertices, -1, dtype=np.int8)
    values[keep] = x
    return ParityFunction(cx.vertices, values, scale.R, int(n_comp), alpha, cx.index)


def delta_parity(pi: ParityFunction, x: str, y: str) -> int:
    return pi[x] ^ pi[y]


# ---------------------------------------------------------------------------
# grid arithmetic


def add_grids(g1: Grid, g2: Grid) -> Grid:
    """Union of hyperplanes, symmetric difference of connectors, XOR of seeds."""
    if g1.scale != g2.scale:
        raise ValueError("grids at different scales")
    for a in g1.connectors:
        for b in g2.connectors:
            if not a.disjoint(b) and not a.same_body(b):
                raise OverlappingConnectors(f"{a.to_dict()} and {b.to_dict()} are neither disjoint nor identical")
    conns = [c for c in g1.connectors if not any(c.same_body(d) for d in g2.connectors)]
    conns += [c for c in g2.connectors if not any(c.same_body(d) for d in g1.connectors)]
    seeds = {h: g1.seed(h) ^ g2.seed(h) for h in set(g1.hyperplanes) | set(g2.hyperplanes)}
    return Grid(set(g1.hyperplanes) | set(g2.hyperplanes), conns, g1.scale, seeds)


def sum_orientations(
    o1: Mapping[int, Orientation], o2: Mapping[int, Orientation]
) -> dict[int, Orientation]:
    out = dict(o1)
    for h, o in o2.items():
        out[h] = out[h] + o if h in out else o
    return out


# ---------------------------------------------------------------------------
# census


@dataclass
class Census:
    histogram: dict[TypePair, int]
    pairs: list[dict[str, Any]]
    failures: list[dict[str, Any]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "histogram": {f"{a},{b}": n for (a, b), n in sorted(self.histogram.items())},
            "pairs": self.pairs,
            "failures": self.failures,
        }


def connector_census(cx: CubeComplex, scale: ScaleParams) -> Census:
    """Types of every intersection component of every crossing pair."""
    hist = {TypePair(a, b): 0 for a in (0, 1) for b in (0, 1)}
    pairs, failures = [], []
    for h, k in sorted(tuple(sorted(e)) for e in crossing_graph(cx).edges):
        comps = intersection_components(cx, h, k, scale)
        if not comps:
            continue
        try:
            hz_h, hz_k = horizon(cx, h, scale), horizon(cx, k, scale)
        except NoHorizonCycle as exc:
            failures.append({"pair": [h, k], "reason": str(exc)})
            continue
        types = []
        for comp in comps:
            body = set(comp.squares)
            t = TypePair(
                sum(s in body for s in hz_h.squares) & 1,
                sum(s in body for s in hz_k.squares) & 1,
            )
            hist[t] += 1
            types.append(list(t))
        pairs.append({"pair": [h, k], "types": types})
    return Census(hist, pairs, failures)


# ---------------------------------------------------------------------------
# grid enumeration


def hyperplane_grids(cx: CubeComplex, scale: ScaleParams, seed: int = 1) -> list[Grid]:
    """One-hyperplane grids for every hyperplane with a nonempty far part."""
    out = []
    for hp in structure(cx).hyperplanes:
        if far_part(cx, hp.id, scale.x0, scale.R1).n:
            out.append(Grid((hp.id,), (), scale, {hp.id: seed}))
    return out


def typed_components(cx: CubeComplex, scale: ScaleParams) -> dict[tuple[int, int], list[tuple[int, TypePair]]]:
    """For each crossing pair with both horizons, ``(component index, type)``."""
    out: dict[tuple[int, int], list[tuple[int, TypePair]]] = {}
    for rec in connector_census(cx, scale).pairs:
        h, k = rec["pair"]
        out[(h, k)] = [(i, TypePair(*t)) for i, t in enumerate(rec["types"])]
    return out


def _oriented_type(t: TypePair, pair: tuple[int, int], first: int) -> TypePair:
    return t if pair[0] == first else TypePair(t.type_k, t.type_h)


def arc_grids(cx: CubeComplex, scale: ScaleParams, limit: int = 50) -> list[Grid]:
    """Grids ``{h, k1, k2}`` with connectors of type ``(1, 0)`` seen from ``h``."""
    typed = typed_components(cx, scale)
    by_h: dict[int, list[Connector]] = defaultdict(list)
    for (a, b), items in typed.items():
        for i, t in items:
            for h, k in ((a, b), (b, a)):
                if _oriented_type(t, (a, b), h) == (1, 0):
                    by_h[h].append(Connector((h, k), (i,)))
    out = []
    for h in sorted(by_h):
        for c1, c2 in combinations(by_h[h], 2):
            if c1.pair[1] == c2.pair[1]:
                continue
            out.append(Grid((h, c1.pair[1], c2.pair[1]), (c1, c2), scale))
            if len(out) >= limit:
                return out
    return out


def cycle_grids(cx: CubeComplex, scale: ScaleParams, length: int = 3, limit: int = 50) -> list[Grid]:
    """Cycles of crossing hyperplanes joined by ``(1, 1)`` components."""
    typed = typed_components(cx, scale)
    good: dict[tuple[int, int], list[int]] = {
        p: [i for i, t in items if t == (1, 1)] for p, items in typed.items()
    }
    good = {p: v for p, v in good.items() if v}
    adj: dict[int, set[int]] = defaultdict(set)
    for a, b in good:
        adj[a].add(b)
        adj[b].add(a)
    out: list[Grid] = []

    def extend(path: list[int]) -> None:
        if len(out) >= limit:
            return
        if len(path) == length:
            if path[0] in adj[path[-1]]:
                conns = []
                for i in range(length):
                    a, b = path[i], path[(i + 1) % length]
                    conns.append(Connector((a, b), (good[_pair(a, b)][0],)))
                out.append(Grid(path, conns, scale))
            return
        for nxt in sorted(adj[path[-1]]):
            # each cycle once: start at its least hyperplane, second < last
            if nxt <= path[0] or nxt in path:
                continue
            if len(path) == length - 1 and nxt < path[1]:
                continue
            extend(path + [nxt])

    for start in sorted(adj):
        extend([start])
    return out
