"""Small bundled complexes used by the tests, the CLI and the docs."""

from __future__ import annotations

from itertools import product

from .complex import CubeComplex, SimplicialComplex
from .racg import HEXAGON_96, torus_triangulation


# ---------------------------------------------------------------------------
# cube complexes


def cube(d: int) -> CubeComplex:
    """A single ``d``-cube with vertices named by their bit strings."""
    names = [format(b, f"0{d}b")[::-1] if d else "0" for b in range(1 << d)]
    return CubeComplex.from_cubes(names, [names], basepoint=names[0])


def square() -> CubeComplex:
    return cube(2)


def grid(shape: tuple[int, ...], basepoint: tuple[int, ...] | None = None) -> CubeComplex:
    """Cubical grid with ``shape[i]`` vertices along axis ``i``.

    Vertices are named ``"i,j,..."``; the basepoint defaults to the centre.
    """
    pts = list(product(*(range(n) for n in shape)))
    name = lambda p: ",".join(map(str, p))  # noqa: E731
    axes = [i for i, n in enumerate(shape) if n > 1]
    cubes = []
    for p in pts:
        if all(p[i] + 1 < shape[i] for i in axes):
            corners = []
            for b in range(1 << len(axes)):
                q = list(p)
                for j, i in enumerate(axes):
                    q[i] += (b >> j) & 1
                corners.append(name(q))
            cubes.append(corners)
    if basepoint is None:
        basepoint = tuple(n // 2 for n in shape)
    names = [name(p) for p in pts]
    return CubeComplex.from_cubes(names, cubes, basepoint=name(basepoint))


def path(n: int) -> CubeComplex:
    """Path graph on ``n`` vertices ``p0 .. p{n-1}``."""
    names = [f"p{i}" for i in range(n)]
    return CubeComplex.from_cubes(names, [[names[i], names[i + 1]] for i in range(n - 1)], basepoint=names[0])


def binary_tree(depth: int) -> CubeComplex:
    """Rooted binary tree; vertex names are the root-to-node bit strings."""
    names = ["r"]
    edges = []
    frontier = ["r"]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for b in "01":
                w = (v if v != "r" else "") + b
                names.append(w)
                edges.append([v, w])
                nxt.append(w)
        frontier = nxt
    return CubeComplex.from_cubes(names, edges, basepoint="r")


def mobius_strip() -> CubeComplex:
    """Three squares glued into a Moebius band; the rung hyperplane is one-sided."""
    names = ["t0", "t1", "t2", "b0", "b1", "b2"]
    squares = [
        ["t0", "t1", "b0", "b1"],
        ["t1", "t2", "b1", "b2"],
        ["t2", "b0", "b2", "t0"],
    ]
    return CubeComplex.from_cubes(names, squares, basepoint="t0")


def hollow_digon() -> CubeComplex:
    """Two squares sharing two adjacent edges: the link at ``a`` has a doubled edge."""
    return CubeComplex.from_cubes(
        ["a", "b", "c", "d", "e"], [["a", "b", "c", "d"], ["a", "b", "c", "e"]], basepoint="a"
    )


# ---------------------------------------------------------------------------
# links (flag simplicial complexes and near misses)


def single_vertex() -> SimplicialComplex:
    return SimplicialComplex(["s"])


def cycle(n: int, prefix: str = "s") -> SimplicialComplex:
    names = [f"{prefix}{i}" for i in range(n)]
    return SimplicialComplex(names, [[names[i], names[(i + 1) % n]] for i in range(n)])


def pentagon() -> SimplicialComplex:
    return cycle(5)


def octahedron() -> SimplicialComplex:
    """Boundary of the octahedron; its right-angled Coxeter group is ``D_inf^3``."""
    names = ["a", "A", "b", "B", "c", "C"]
    tris = [[x, y, z] for x in "aA" for y in "bB" for z in "cC"]
    return SimplicialComplex(names, tris)


def suspension(base: SimplicialComplex, poles: tuple[str, str] = ("n", "S")) -> SimplicialComplex:
    names = list(base.vertices) + list(poles)
    simplices = [list(s) + [p] for s in base.maximal_simplices for p in poles]
    return SimplicialComplex(names, simplices)


def pentagon_suspension() -> SimplicialComplex:
    return suspension(pentagon())


def bowtie() -> SimplicialComplex:
    """Two triangles sharing one vertex, which separates."""
    return SimplicialComplex(["m", "a", "b", "c", "d"], [["m", "a", "b"], ["m", "c", "d"]])


def hollow_triangle() -> SimplicialComplex:
    return cycle(3)


def square_link() -> SimplicialComplex:
    return cycle(4)


def torus(v1: tuple[int, int] = HEXAGON_96[0], v2: tuple[int, int] = HEXAGON_96[1]) -> SimplicialComplex:
    return torus_triangulation(v1, v2)


LINKS = {
    "single-vertex": single_vertex,
    "pentagon": pentagon,
    "hexagon": lambda: cycle(6),
    "octahedron": octahedron,
    "pentagon-suspension": pentagon_suspension,
    "bowtie": bowtie,
    "hollow-triangle": hollow_triangle,
    "square": square_link,
    "torus": torus,
}
