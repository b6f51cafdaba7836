"""Finite cube complexes, simplicial complexes, links and edge-path balls.

Cubes are stored as vertex-index tuples of length ``2**d`` in binary
coordinate order: the vertex at position ``b`` is the corner whose
coordinate bitmask is ``b``.  The canonical representative of a cube puts
its smallest vertex index at corner 0 and orders the coordinates by the
index of the corresponding neighbour of corner 0.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Iterator, Mapping, Sequence

import jsonschema
import numpy as np

from .errors import BadCubeShape, NonSimpleSkeleton, SchemaError, UnknownVertex

Cube = tuple[int, ...]

SCHEMA_VERSION = 1

COMPLEX_SCHEMA = {
    "type": "object",
    "required": ["vertices", "cubes"],
    "properties": {
        "vertices": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "cubes": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        },
        "basepoint": {"type": ["string", "null"]},
    },
}

SIMPLICIAL_SCHEMA = {
    "type": "object",
    "required": ["vertices", "maximal_simplices"],
    "properties": {
        "vertices": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "maximal_simplices": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        },
    },
}


def canonical_cube(t: Sequence[int]) -> Cube:
    """Return the canonical corner ordering of a cube given in any binary order."""
    n = len(t)
    if n == 1:
        return (t[0],)
    d = n.bit_length() - 1
    b0 = min(range(n), key=t.__getitem__)
    axes = sorted(range(d), key=lambda i: t[b0 ^ (1 << i)])
    out = []
    for c in range(n):
        old = b0
        for new_i, old_i in enumerate(axes):
            if (c >> new_i) & 1:
                old ^= 1 << old_i
        out.append(t[old])
    return tuple(out)


def cube_dimension(t: Sequence[int]) -> int:
    return len(t).bit_length() - 1


def facet_pairs(t: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Opposite facet pairs of a cube, one pair per coordinate, un-canonicalized.

    Pair ``j`` holds the facets with coordinate ``j`` equal to 0 and to 1.
    Both keep the binary order of the remaining coordinates, so corner ``c``
    of one facet is joined to corner ``c`` of the other by an edge along ``j``.
    """
    n = len(t)
    d = cube_dimension(t)
    pairs = []
    for j in range(d):
        low = tuple(t[c] for c in range(n) if not (c >> j) & 1)
        high = tuple(t[c] for c in range(n) if (c >> j) & 1)
        pairs.append((low, high))
    return pairs


def _key(t: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(t))


class CubeComplex:
    """Immutable finite cube complex.

    Use :meth:`from_cubes` (or :func:`load_complex`) to build one from
    arbitrary input; the constructor trusts that ``cubes_by_dim`` is already
    face-closed and canonical.
    """

    def __init__(
        self,
        vertices: Sequence[str],
        cubes_by_dim: Sequence[Sequence[Cube]],
        basepoint: str | None = None,
    ):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.index: dict[str, int] = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        cubes = [tuple((i,) for i in range(n))]
        cubes.extend(tuple(c) for c in cubes_by_dim[1:])
        while len(cubes) > 1 and not cubes[-1]:
            cubes.pop()
        if len(cubes) == 1:
            cubes.append(())
        self._cubes: tuple[tuple[Cube, ...], ...] = tuple(cubes)
        if basepoint is not None and basepoint not in self.index:
            raise UnknownVertex(f"basepoint {basepoint!r} is not a vertex")
        self.basepoint = basepoint
        self._cache: dict[Any, Any] = {}

        self.edges: tuple[Cube, ...] = self._cubes[1]
        self.edge_index: dict[Cube, int] = {e: i for i, e in enumerate(self.edges)}
        self.squares: tuple[Cube, ...] = self._cubes[2] if len(self._cubes) > 2 else ()
        ei = self.edge_index
        # columns: the two edges along coordinate 0, then the two along coordinate 1
        self.square_edges = np.array(
            [
                (ei[_key((a, b))], ei[_key((c, d))], ei[_key((a, c))], ei[_key((b, d))])
                for a, b, c, d in self.squares
            ],
            dtype=np.int64,
        ).reshape(-1, 4)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)

    # -- construction -------------------------------------------------

    @classmethod
    def from_cubes(
        cls,
        vertices: Sequence[str],
        cubes: Iterable[Sequence[str]],
        basepoint: str | None = None,
    ) -> "CubeComplex":
        """Validate cubes given by vertex ids, close them under faces and build."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise SchemaError("duplicate vertex ids")
        by_key: list[dict[tuple[int, ...], Cube]] = [{}]
        stack: list[Cube] = []
        for raw in cubes:
            try:
                t = tuple(index[v] for v in raw)
            except KeyError as exc:
                raise SchemaError(f"cube {list(raw)} uses unknown vertex {exc.args[0]!r}") from None
            n = len(t)
            if n == 0 or n & (n - 1):
                raise BadCubeShape(f"cube {list(raw)} has {n} vertices, not a power of two")
            if len(set(t)) != n:
                if n == 2:
                    raise NonSimpleSkeleton(f"loop edge at {raw[0]!r}")
                raise BadCubeShape(f"cube {list(raw)} repeats a vertex")
            stack.append(t)
        while stack:
            t = stack.pop()
            if len(t) == 1:
                continue
            c = canonical_cube(t)
            d = cube_dimension(c)
            while len(by_key) <= d:
                by_key.append({})
            k = _key(c)
            seen = by_key[d].get(k)
            if seen is not None:
                if seen != c:
                    raise BadCubeShape(
                        f"two different {d}-cubes on vertices {[vertices[i] for i in k]}"
                    )
                continue
            by_key[d][k] = c
            for low, high in facet_pairs(c):
                stack.append(low)
                stack.append(high)
        cubes_by_dim: list[list[Cube]] = [[]]
        for d in range(1, len(by_key)):
            cubes_by_dim.append(sorted(by_key[d].values()))
        return cls(vertices, cubes_by_dim, basepoint)

    # -- basic queries ------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        for d in range(len(self._cubes) - 1, 0, -1):
            if self._cubes[d]:
                return d
        return 0

    def cubes(self, d: int) -> tuple[Cube, ...]:
        if d < 0:
            raise ValueError("negative dimension")
        return self._cubes[d] if d < len(self._cubes) else ()

    def counts(self) -> list[int]:
        return [len(self.cubes(d)) for d in range(self.dim + 1)]

    def vid(self, v: str) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def cube_lookup(self, d: int) -> dict[tuple[int, ...], int]:
        """Map from sorted vertex tuple to cube id, for cubes of dimension ``d``."""
        key = ("lookup", d)
        table = self._cache.get(key)
        if table is None:
            table = {_key(c): i for i, c in enumerate(self.cubes(d))}
            self._cache[key] = table
        return table

    def vertex_cubes(self) -> list[list[tuple[int, int]]]:
        """For each vertex, the ``(d, cube id)`` pairs of cubes of dimension >= 1 containing it."""
        table = self._cache.get("vertex_cubes")
        if table is None:
            table = [[] for _ in range(self.n_vertices)]
            for d in range(1, self.dim + 1):
                for i, c in enumerate(self._cubes[d]):
                    for v in c:
                        table[v].append((d, i))
            self._cache["vertex_cubes"] = table
        return table

    def cube3_face_pairs(self) -> np.ndarray:
        """For each 3-cube, the square ids of its opposite faces: shape ``(n, 3, 2)``."""
        table = self._cache.get("cube3_faces")
        if table is None:
            lookup = self.cube_lookup(2)
            rows = []
            for c in self.cubes(3):
                rows.append([[lookup[_key(lo)], lookup[_key(hi)]] for lo, hi in facet_pairs(c)])
            table = np.array(rows, dtype=np.int64).reshape(-1, 3, 2)
            self._cache["cube3_faces"] = table
        return table

    def distances(self, x0: str) -> np.ndarray:
        """Edge-path distances from ``x0``; unreachable vertices get ``-1``."""
        key = ("dist", x0)
        dist = self._cache.get(key)
        if dist is None:
            dist = bfs_distances(self.adjacency, self.vid(x0))
            dist.setflags(write=False)
            self._cache[key] = dist
        return dist

    def maximal_cubes(self) -> list[Cube]:
        covered: set[tuple[int, ...]] = set()
        for d in range(2, self.dim + 1):
            for c in self._cubes[d]:
                for lo, hi in facet_pairs(c):
                    covered.add(_key(lo))
                    covered.add(_key(hi))
        out = []
        for d in range(1, self.dim + 1):
            out.extend(c for c in self._cubes[d] if _key(c) not in covered)
        return out

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        names = self.vertices
        doc: dict[str, Any] = {
            "vertices": list(names),
            "cubes": [[names[i] for i in c] for c in self.maximal_cubes()],
        }
        if self.basepoint is not None:
            doc["basepoint"] = self.basepoint
        return doc

    def __repr__(self) -> str:
        return f"CubeComplex(counts={self.counts()}, basepoint={self.basepoint!r})"


def bfs_distances(adjacency: Sequence[Sequence[int]], source: int) -> np.ndarray:
    dist = np.full(len(adjacency), -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adjacency[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def _parse(document: str | bytes | Mapping[str, Any], schema: Mapping[str, Any]) -> Mapping[str, Any]:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from None
    return document


def load_complex(document: str | bytes | Mapping[str, Any]) -> CubeComplex:
    """Load a cube complex from its JSON document (text or parsed mapping)."""
    doc = _parse(document, COMPLEX_SCHEMA)
    basepoint = doc.get("basepoint")
    if basepoint is not None and basepoint not in set(doc["vertices"]):
        raise SchemaError(f"basepoint {basepoint!r} is not a vertex")
    return CubeComplex.from_cubes(doc["vertices"], doc["cubes"], basepoint)


def dump_complex(cx: CubeComplex) -> str:
    return json.dumps(cx.to_dict(), separators=(",", ":"))


# ---------------------------------------------------------------------------
# simplicial complexes


class SimplicialComplex:
    """Immutable finite abstract simplicial complex with its full face lattice."""

    def __init__(self, vertices: Sequence[str], simplices: Iterable[Iterable[str]] = ()):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.order: dict[str, int] = {v: i for i, v in enumerate(self.vertices)}
        if len(self.order) != len(self.vertices):
            raise SchemaError("duplicate vertex ids")
        faces: set[frozenset[str]] = {frozenset((v,)) for v in self.vertices}
        for s in simplices:
            s = frozenset(s)
            if not s:
                continue
            missing = s.difference(self.order)
            if missing:
                raise SchemaError(f"simplex uses unknown vertices {sorted(missing)}")
            if s in faces:
                continue
            members = sorted(s, key=self.order.__getitem__)
            for k in range(1, len(members) + 1):
                faces.update(frozenset(f) for f in combinations(members, k))
        self.simplices: frozenset[frozenset[str]] = frozenset(faces)
        self._graph: dict[str, set[str]] | None = None

    def sort(self, s: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(s, key=self.order.__getitem__))

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def faces(self, k: int) -> list[tuple[str, ...]]:
        """All ``k``-simplices as ordered vertex tuples, in deterministic order."""
        out = [self.sort(s) for s in self.simplices if len(s) == k + 1]
        out.sort(key=lambda t: [self.order[v] for v in t])
        return out

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dim + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    @property
    def maximal_simplices(self) -> list[tuple[str, ...]]:
        out = []
        for s in self.simplices:
            if not any(len(t) == len(s) + 1 and s < t for t in self._cofaces(s)):
                out.append(self.sort(s))
        out.sort(key=lambda t: (len(t), [self.order[v] for v in t]))
        return out

    def _cofaces(self, s: frozenset[str]) -> Iterator[frozenset[str]]:
        g = self.graph
        common = set.intersection(*(g[v] for v in s)) if s else set(self.vertices)
        for w in common:
            t = s | {w}
            if t in self.simplices:
                yield t

    @property
    def graph(self) -> dict[str, set[str]]:
        if self._graph is None:
            g: dict[str, set[str]] = {v: set() for v in self.vertices}
            for s in self.simplices:
                if len(s) == 2:
                    a, b = s
                    g[a].add(b)
                    g[b].add(a)
            self._graph = g
        return self._graph

    def link(self, v: str) -> "SimplicialComplex":
        if v not in self.order:
            raise UnknownVertex(f"unknown vertex {v!r}")
        star = [s - {v} for s in self.simplices if v in s and len(s) > 1]
        verts = self.sort(set().union(*star)) if star else ()
        return SimplicialComplex(verts, star)

    def full_subcomplex(self, keep: Iterable[str]) -> "SimplicialComplex":
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        return SimplicialComplex(verts, [s for s in self.simplices if s <= keep])

    def components(self, keep: Iterable[str] | None = None) -> list[set[str]]:
        """Connected components of the 1-skeleton, optionally of the full subcomplex on ``keep``."""
        allowed = set(self.vertices) if keep is None else set(keep)
        g = self.graph
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v not in allowed or v in seen:
                continue
            comp = {v}
            queue = deque([v])
            while queue:
                u = queue.popleft()
                for w in g[u]:
                    if w in allowed and w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": list(self.vertices),
            "maximal_simplices": [list(s) for s in self.maximal_simplices],
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and self.simplices == other.simplices

    def __hash__(self) -> int:
        return hash(self.simplices)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector()})"


def load_simplicial(document: str | bytes | Mapping[str, Any]) -> SimplicialComplex:
    doc = _parse(document, SIMPLICIAL_SCHEMA)
    return SimplicialComplex(doc["vertices"], doc["maximal_simplices"])


def dump_simplicial(s: SimplicialComplex) -> str:
    return json.dumps(s.to_dict(), separators=(",", ":"))


# ---------------------------------------------------------------------------
# scale parameters


@dataclass(frozen=True)
class ScaleParams:
    """Basepoint and the three nested edge-path radii ``R0 <= R1 <= R``.

    ``R1`` defaults to ``R0 + 1`` and ``R`` to ``R1 + 1``.
    """

    x0: str
    R0: int = 1
    R1: int | None = None
    R: int | None = None

    def __post_init__(self) -> None:
        if self.R1 is None:
            object.__setattr__(self, "R1", self.R0 + 1)
        if self.R is None:
            object.__setattr__(self, "R", self.R1 + 1)
        if not 0 <= self.R0 <= self.R1 <= self.R:
            raise ValueError(f"need 0 <= R0 <= R1 <= R, got {self.R0}, {self.R1}, {self.R}")

    def to_dict(self) -> dict[str, Any]:
        return {"x0": self.x0, "R0": self.R0, "R1": self.R1, "R": self.R}


# ---------------------------------------------------------------------------
# operations


def _link_simplices(cx: CubeComplex, v: int) -> list[frozenset[int]]:
    out = []
    for d, i in cx.vertex_cubes()[v]:
        c = cx.cubes(d)[i]
        b = c.index(v)
        out.append(frozenset(c[b ^ (1 << j)] for j in range(d)))
    return out


def vertex_link(cx: CubeComplex, v: str) -> SimplicialComplex:
    """Link of a vertex: one link vertex per incident edge (named by the far
    endpoint), one ``k``-simplex per incident ``(k+1)``-cube."""
    i = cx.vid(v)
    names = cx.vertices
    verts = [names[w] for w in cx.adjacency[i]]
    return SimplicialComplex(verts, [[names[w] for w in s] for s in _link_simplices(cx, i)])


def is_flag(s: SimplicialComplex) -> tuple[bool, tuple[str, ...] | None]:
    """Check the flag condition.

    Returns ``(True, None)`` or ``(False, clique)`` where ``clique`` is a
    minimal clique of the 1-skeleton that does not span a simplex.
    """
    g = s.graph
    level = [frozenset((a, b)) for a in s.vertices for b in g[a] if s.order[a] < s.order[b]]
    level.sort(key=lambda f: sorted(s.order[v] for v in f))
    while level:
        nxt: set[frozenset[str]] = set()
        for f in level:
            common = set.intersection(*(g[v] for v in f))
            for w in common:
                cand = f | {w}
                if cand in nxt:
                    continue
                if cand not in s.simplices:
                    # every proper face is a simplex: smaller cliques were all checked
                    return False, s.sort(cand)
                nxt.add(cand)
        level = sorted(nxt, key=lambda f: sorted(s.order[v] for v in f))
    return True, None


def ball(cx: CubeComplex, x0: str, r: int) -> CubeComplex:
    """Full subcomplex on vertices within edge-path distance ``r`` of ``x0``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    dist = cx.distances(x0)
    keep = (dist >= 0) & (dist <= r)
    return induced_subcomplex(cx, np.flatnonzero(keep), basepoint=x0)


def induced_subcomplex(cx: CubeComplex, keep: Iterable[int], basepoint: str | None = None) -> CubeComplex:
    keep = sorted(keep)
    remap = np.full(cx.n_vertices, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    cubes: list[list[Cube]] = [[]]
    for d in range(1, cx.dim + 1):
        layer = []
        for c in cx.cubes(d):
            m = remap[list(c)]
            if (m >= 0).all():
                layer.append(tuple(int(x) for x in m))
        cubes.append(layer)
    # remapping is monotone, so canonical forms and their sort order survive
    return CubeComplex([cx.vertices[i] for i in keep], cubes, basepoint)


@dataclass
class NpcReport:
    """Per-vertex link verdicts for the Gromov link condition."""

    flag: dict[str, bool] = field(default_factory=dict)
    simplicial: dict[str, bool] = field(default_factory=dict)
    violations: dict[str, list[str]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flag.values()) and all(self.simplicial.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "failing_vertices": [v for v in self.flag if not (self.flag[v] and self.simplicial[v])],
            "violations": self.violations,
        }


def check_npc(cx: CubeComplex, vertices: Iterable[str] | None = None) -> NpcReport:
    """Check that vertex links are simplicial flag complexes.

    A link is non-simplicial when two distinct cubes at the vertex span the
    same set of corner directions (for example two squares glued along two
    adjacent edges).
    """
    names = cx.vertices
    report = NpcReport()
    todo = names if vertices is None else list(vertices)
    for v in todo:
        i = cx.vid(v)
        raw = _link_simplices(cx, i)
        report.simplicial[v] = len(set(raw)) == len(raw)
        link = SimplicialComplex(
            [names[w] for w in cx.adjacency[i]], [[names[w] for w in s] for s in raw]
        )
        ok, clique = is_flag(link)
        report.flag[v] = ok
        if clique is not None:
            report.violations[v] = list(clique)
    return report
