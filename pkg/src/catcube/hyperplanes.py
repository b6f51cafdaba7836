"""Hyperplanes as edge-parallelism classes, halfspaces, and their intersections."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Any

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .complex import CubeComplex, ScaleParams, canonical_cube
from .errors import NonSeparating


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edges: tuple[int, ...]
    carrier: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class HalfspacePair:
    hyperplane: int
    side0: frozenset[int]
    side1: frozenset[int]

    def side_of(self, v: int) -> int:
        return 0 if v in self.side0 else 1


@dataclass(frozen=True)
class IntersectionComponent:
    """Squares dual to both ``h`` and ``k``, connected through 3-cubes."""

    pair: tuple[int, int]
    index: int
    squares: tuple[int, ...]


class _Structure:
    """Hyperplane bookkeeping shared by every query on one complex."""

    def __init__(self, cx: CubeComplex):
        n_edges = len(cx.edges)
        se = cx.square_edges
        if len(se):
            rows = np.concatenate([se[:, 0], se[:, 2]])
            cols = np.concatenate([se[:, 1], se[:, 3]])
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_edges, n_edges))
        _, labels = connected_components(graph, directed=False)
        # renumber classes by least edge id
        first = {}
        for e, lab in enumerate(labels.tolist()):
            first.setdefault(lab, len(first))
        self.edge_h = np.array([first[lab] for lab in labels.tolist()], dtype=np.int64)
        members: list[list[int]] = [[] for _ in range(len(first))]
        for e, h in enumerate(self.edge_h.tolist()):
            members[h].append(e)
        pairs = np.sort(self.edge_h[se[:, [0, 2]]], axis=1) if len(se) else np.zeros((0, 2), np.int64)
        self.square_pair = pairs
        carriers: list[list[int]] = [[] for _ in members]
        self.pair_squares: dict[tuple[int, int], list[int]] = defaultdict(list)
        for s, (h, k) in enumerate(pairs.tolist()):
            carriers[h].append(s)
            carriers[k].append(s)
            self.pair_squares[(h, k)].append(s)
        self.hyperplanes = [
            Hyperplane(i, tuple(m), tuple(carriers[i])) for i, m in enumerate(members)
        ]
        self._cx = cx
        self._h_cubes: dict[int, list[tuple[int, int, int]]] | None = None
        self._pair_faces: dict[tuple[int, int], list[tuple[int, int]]] | None = None

    def cube_axes(self, d: int) -> np.ndarray:
        """Hyperplane id of each axis of each ``d``-cube, shape ``(n, d)``."""
        cx = self._cx
        cubes = cx.cubes(d)
        if not cubes:
            return np.zeros((0, d), dtype=np.int64)
        arr = np.array(cubes, dtype=np.int64)
        cols = []
        for j in range(d):
            a, b = arr[:, 0], arr[:, 1 << j]
            lo, hi = np.minimum(a, b), np.maximum(a, b)
            ids = [cx.edge_index[(u, v)] for u, v in zip(lo.tolist(), hi.tolist())]
            cols.append(self.edge_h[ids])
        return np.stack(cols, axis=1)

    def h_cubes(self) -> dict[int, list[tuple[int, int, int]]]:
        """For each hyperplane, the ``(d, cube id, axis)`` of cubes of dim >= 2 it crosses."""
        if self._h_cubes is None:
            table: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
            for d in range(2, self._cx.dim + 1):
                axes = self.cube_axes(d)
                for i, row in enumerate(axes.tolist()):
                    for j, h in enumerate(row):
                        table[h].append((d, i, j))
            self._h_cubes = table
        return self._h_cubes

    def pair_faces(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        """For each hyperplane pair, the opposite square faces of 3-cubes dual to both."""
        if self._pair_faces is None:
            table: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
            faces = self._cx.cube3_face_pairs()
            axes = self.cube_axes(3)
            for c in range(len(axes)):
                a = axes[c].tolist()
                for j in range(3):
                    others = sorted(a[i] for i in range(3) if i != j)
                    table[(others[0], others[1])].append(tuple(faces[c, j].tolist()))
            self._pair_faces = table
        return self._pair_faces


def structure(cx: CubeComplex) -> _Structure:
    s = cx._cache.get("hyperplanes")
    if s is None:
        s = _Structure(cx)
        cx._cache["hyperplanes"] = s
    return s


def hyperplanes(cx: CubeComplex) -> list[Hyperplane]:
    """Parallelism classes of edges, ordered by least edge id."""
    return list(structure(cx).hyperplanes)


def edge_hyperplane(cx: CubeComplex) -> np.ndarray:
    return structure(cx).edge_h


def halfspaces(cx: CubeComplex, h: Hyperplane | int) -> HalfspacePair:
    """The two sides of a hyperplane: components of the 1-skeleton minus its edges.

    ``side0`` is the side containing the smallest vertex index.
    """
    hid = h if isinstance(h, int) else h.id
    st = structure(cx)
    keep = st.edge_h != hid
    edges = np.array(cx.edges, dtype=np.int64).reshape(-1, 2)[keep]
    n = cx.n_vertices
    graph = coo_matrix((np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    count, labels = connected_components(graph, directed=False)
    if count != 2:
        raise NonSeparating(f"hyperplane {hid}: removing its edges leaves {count} components")
    lab0 = labels[0]
    for e in st.hyperplanes[hid].edges:
        u, v = cx.edges[e]
        if labels[u] == labels[v]:
            raise NonSeparating(f"hyperplane {hid}: edge {e} does not cross between the sides")
    side0 = frozenset(np.flatnonzero(labels == lab0).tolist())
    side1 = frozenset(np.flatnonzero(labels != lab0).tolist())
    return HalfspacePair(hid, side0, side1)


def hyperplane_complex(cx: CubeComplex, h: Hyperplane | int) -> CubeComplex:
    """The hyperplane as a cube complex of its own.

    Vertex ``i`` is the ``i``-th edge of the class (named ``"u|v"``); each
    ``(k+1)``-cube crossed by the hyperplane contributes its midcube as a
    ``k``-cube.
    """
    hid = h if isinstance(h, int) else h.id
    st = structure(cx)
    hp = st.hyperplanes[hid]
    local = {e: i for i, e in enumerate(hp.edges)}
    names = [f"{cx.vertices[u]}|{cx.vertices[v]}" for u, v in (cx.edges[e] for e in hp.edges)]
    by_dim: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for s in hp.carrier:
        # each carrier square gives an edge between the two class edges it contains
        axis = 0 if st.edge_h[cx.square_edges[s, 0]] == hid else 1
        by_dim[1].append(canonical_cube(_midcube(cx, cx.squares[s], axis, local)))
    for d, i, j in st.h_cubes().get(hid, ()):
        if d == 2:
            continue
        by_dim[d - 1].append(canonical_cube(_midcube(cx, cx.cubes(d)[i], j, local)))
    top = max(by_dim, default=0)
    cubes = [[]] + [sorted(set(by_dim.get(k, []))) for k in range(1, top + 1)]
    return CubeComplex(names, cubes)


def _midcube(cx: CubeComplex, cube: tuple[int, ...], axis: int, local: dict[int, int]) -> tuple[int, ...]:
    n = len(cube)
    out = []
    for c in range(n):
        if (c >> axis) & 1:
            continue
        u, v = cube[c], cube[c | (1 << axis)]
        out.append(local[cx.edge_index[(min(u, v), max(u, v))]])
    return tuple(out)


def intersection_components(
    cx: CubeComplex, h: int, k: int, scale: ScaleParams | None = None
) -> list[IntersectionComponent]:
    """Components of the squares dual to both ``h`` and ``k``.

    With a scale, only squares whose four vertices lie at distance greater
    than ``R0`` from ``x0`` are kept.  Two squares are adjacent when they are
    opposite faces of a common 3-cube.
    """
    if h == k:
        raise ValueError("need two distinct hyperplanes")
    pair = (min(h, k), max(h, k))
    key = ("components", pair, None if scale is None else (scale.x0, scale.R0))
    hit = cx._cache.get(key)
    if hit is None:
        hit = tuple(_components(cx, pair, scale))
        cx._cache[key] = hit
    return list(hit)


def _components(cx: CubeComplex, pair: tuple[int, int], scale: ScaleParams | None) -> list[IntersectionComponent]:
    st = structure(cx)
    squares = st.pair_squares.get(pair, [])
    if scale is not None:
        dist = cx.distances(scale.x0)
        squares = [s for s in squares if all(dist[v] > scale.R0 for v in cx.squares[s])]
    if not squares:
        return []
    pos = {s: i for i, s in enumerate(squares)}
    parent = list(range(len(squares)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in st.pair_faces().get(pair, ()):
        if a in pos and b in pos:
            ra, rb = find(pos[a]), find(pos[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = defaultdict(list)
    for s in squares:
        groups[find(pos[s])].append(s)
    ordered = sorted(groups.values(), key=min)
    return [IntersectionComponent(pair, i, tuple(sorted(g))) for i, g in enumerate(ordered)]


def crossing_graph(cx: CubeComplex) -> nx.Graph:
    """Graph on hyperplane ids with an edge whenever some square is dual to both."""
    st = structure(cx)
    g = nx.Graph()
    g.add_nodes_from(range(len(st.hyperplanes)))
    g.add_edges_from(st.pair_squares.keys())
    return g


# ---------------------------------------------------------------------------
# export

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def to_dot(cx: CubeComplex) -> str:
    """Graphviz text of the 1-skeleton, edges coloured by hyperplane."""
    edge_h = edge_hyperplane(cx)
    lines = ["graph skeleton {", "  node [shape=point];"]
    for v in cx.vertices:
        lines.append(f"  {json.dumps(v)};")
    for e, (u, v) in enumerate(cx.edges):
        h = int(edge_h[e])
        color = _PALETTE[h % len(_PALETTE)]
        lines.append(
            f"  {json.dumps(cx.vertices[u])} -- {json.dumps(cx.vertices[v])}"
            f' [color="{color}", label="h{h}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def hyperplanes_to_dict(cx: CubeComplex, with_halfspaces: bool = True) -> dict[str, Any]:
    names = cx.vertices
    out = []
    for hp in hyperplanes(cx):
        item: dict[str, Any] = {
            "id": hp.id,
            "edges": [[names[u], names[v]] for u, v in (cx.edges[e] for e in hp.edges)],
        }
        if with_halfspaces:
            try:
                hs = halfspaces(cx, hp.id)
            except NonSeparating as exc:
                item["halfspaces"] = None
                item["error"] = str(exc)
            else:
                item["halfspaces"] = [1 if v in hs.side1 else 0 for v in range(cx.n_vertices)]
        out.append(item)
    return {"hyperplanes": out}


def hyperplane_dimension(cx: CubeComplex, h: int) -> int:
    """Dimension of the hyperplane complex without building it."""
    st = structure(cx)
    dims = [d for d, _, _ in st.h_cubes().get(h, ())]
    return max(dims, default=1) - 1

