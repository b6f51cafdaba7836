"""Right-angled Coxeter groups, Davis-complex balls and link validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable, Sequence

from .complex import CubeComplex, SimplicialComplex, is_flag
from .errors import BallTooLarge, DisconnectedInput, NotFlag, UnknownGenerator

DEFAULT_CAP = 200_000


class RacgPresentation:
    """The right-angled Coxeter group of a flag complex ``L``.

    Generators are the vertices of ``L`` (ordered as in ``L.vertices``; this
    order drives ShortLex), and two generators commute iff they span an edge.
    """

    def __init__(self, L: SimplicialComplex):
        self.L = L
        self.generators: tuple[str, ...] = L.vertices
        self.gindex = {s: i for i, s in enumerate(self.generators)}
        n = len(self.generators)
        g = L.graph
        # commute[i] is a bitmask of generators commuting with i (excluding i)
        self.commute: list[int] = [0] * n
        for s, nbrs in g.items():
            i = self.gindex[s]
            for t in nbrs:
                self.commute[i] |= 1 << self.gindex[t]
        self.simplices: list[tuple[int, ...]] = sorted(
            (tuple(sorted(self.gindex[v] for v in s)) for s in L.simplices),
            key=lambda t: (len(t), t),
        )

    def commutes(self, i: int, j: int) -> bool:
        return bool((self.commute[i] >> j) & 1)

    def encode(self, word: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(self.gindex[s] for s in word)
        except KeyError as exc:
            raise UnknownGenerator(f"unknown generator {exc.args[0]!r}") from None

    def decode(self, word: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.generators[i] for i in word)


@dataclass(frozen=True)
class GroupElement:
    """A group element stored by its ShortLex normal form."""

    word: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.word)

    @property
    def label(self) -> str:
        return ".".join(self.word) if self.word else "e"


def _reduce(p: RacgPresentation, word: Sequence[int]) -> list[int]:
    """Cancel letters until the word is geodesic.

    An appended letter ``s`` cancels against the last earlier ``s`` that can be
    shuffled to the end past letters commuting with it.
    """
    out: list[int] = []
    for s in word:
        for j in range(len(out) - 1, -1, -1):
            t = out[j]
            if t == s:
                del out[j]
                break
            if not p.commutes(s, t):
                out.append(s)
                break
        else:
            out.append(s)
    return out


def _lexmin(p: RacgPresentation, word: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least word in the commutation class of a geodesic word."""
    rest = list(word)
    out = []
    while rest:
        best = None
        for j, s in enumerate(rest):
            # s can move to the front iff every earlier letter commutes with it
            if all(p.commutes(s, t) for t in rest[:j]) and (best is None or s < rest[best]):
                best = j
        out.append(rest.pop(best))
    return tuple(out)


def normal_form_indices(p: RacgPresentation, word: Sequence[int]) -> tuple[int, ...]:
    return _lexmin(p, _reduce(p, word))


def normal_form(p: RacgPresentation, word: Iterable[str]) -> GroupElement:
    """Geodesic ShortLex normal form of a word in the generators."""
    return GroupElement(p.decode(normal_form_indices(p, p.encode(word))))


def right_multiply(p: RacgPresentation, nf: tuple[int, ...], s: int) -> tuple[int, ...] | None:
    """Normal form of ``nf * s`` when it is longer than ``nf``, else ``None``.

    ``s`` is a right descent of ``nf`` exactly when the last letter that is
    equal to or fails to commute with ``s`` is ``s`` itself.  Otherwise the
    greedy ShortLex construction places ``s`` at the first position after
    every non-commuting letter where it is smaller than the current letter.
    """
    q = 0
    for j in range(len(nf) - 1, -1, -1):
        t = nf[j]
        if t == s:
            return None
        if not p.commutes(s, t):
            q = j + 1
            break
    for j in range(q, len(nf)):
        if s < nf[j]:
            return nf[:j] + (s,) + nf[j:]
    return nf + (s,)


def enumerate_ball(p: RacgPresentation, radius: int, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """Normal forms of all elements of length ``<= radius`` in BFS (length, ShortLex) order."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    n = len(p.generators)
    elements: list[tuple[int, ...]] = [()]
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(radius):
        seen: set[tuple[int, ...]] = set()
        for g in frontier:
            for s in range(n):
                h = right_multiply(p, g, s)
                if h is not None:
                    seen.add(h)
        if len(elements) + len(seen) > cap:
            raise BallTooLarge(
                f"ball would exceed {cap} vertices (at least {len(elements) + len(seen)})"
            )
        frontier = sorted(seen)
        elements.extend(frontier)
    return elements


def davis_ball(p: RacgPresentation, radius: int, cap: int = DEFAULT_CAP) -> CubeComplex:
    """The Davis complex restricted to group elements of length ``<= radius``.

    Cubes are the cosets ``g W_sigma`` of spherical (clique) subgroups whose
    ``2**d`` elements all lie in the ball.  Each coset is emitted once, from
    its shortest element ``g``, with corner ``b`` equal to ``g`` times the
    product of the generators of ``sigma`` selected by ``b``.  The basepoint is
    the identity, labelled ``"e"``.
    """
    elements = enumerate_ball(p, radius, cap)
    index = {g: i for i, g in enumerate(elements)}
    labels = [GroupElement(p.decode(g)).label for g in elements]
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for g in elements:
        room = radius - len(g)
        if room <= 0:
            continue
        ascents = [s for s in range(len(p.generators)) if right_multiply(p, g, s) is not None]
        ascent_set = set(ascents)
        for sigma in p.simplices:
            if len(sigma) > room:
                break
            if not ascent_set.issuperset(sigma):
                continue
            corners = [g]
            for s in sigma:
                # sigma is a clique, so s commutes with every earlier letter of sigma
                corners = corners + [right_multiply(p, c, s) for c in corners]
            cube = tuple(index[c] for c in corners)
            by_dim.setdefault(len(sigma), []).append(_canonical_from_min(cube))
    top = max(by_dim, default=0)
    cubes = [[]] + [sorted(by_dim.get(d, [])) for d in range(1, top + 1)]
    return CubeComplex(labels, cubes, basepoint="e")


def _canonical_from_min(cube: tuple[int, ...]) -> tuple[int, ...]:
    # corner 0 is the coset minimum, which has the least BFS index; only the
    # axes need sorting by neighbour index
    d = len(cube).bit_length() - 1
    axes = sorted(range(d), key=lambda i: cube[1 << i])
    out = []
    for c in range(len(cube)):
        old = 0
        for new_i, old_i in enumerate(axes):
            if (c >> new_i) & 1:
                old |= 1 << old_i
        out.append(cube[old])
    return tuple(out)


# ---------------------------------------------------------------------------
# link validators


def _check_connected(L: SimplicialComplex) -> None:
    if len(L.components()) != 1:
        raise DisconnectedInput("complex is not connected")


def find_separating_simplex(L: SimplicialComplex) -> tuple[str, ...] | None:
    """A simplex whose deletion (with all simplices meeting it) disconnects ``L``.

    Deleting a simplex leaves the full subcomplex on the remaining vertices;
    it separates when that subcomplex has two or more components.
    """
    _check_connected(L)
    verts = set(L.vertices)
    for k in range(L.dim + 1):
        for s in L.faces(k):
            if len(L.components(verts.difference(s))) >= 2:
                return s
    return None


def find_empty_square(L: SimplicialComplex) -> tuple[str, str, str, str] | None:
    """An induced 4-cycle ``(a, b, c, d)`` of the 1-skeleton, or ``None``."""
    ok, _ = is_flag(L)
    if not ok:
        raise NotFlag("empty-square test needs a flag complex")
    g = L.graph
    order = L.order
    for a, c in combinations(L.vertices, 2):
        if c in g[a]:
            continue
        common = sorted(g[a] & g[c], key=order.__getitem__)
        for b, d in combinations(common, 2):
            if d not in g[b]:
                return (a, b, c, d)
    return None


def _is_cycle_graph(s: SimplicialComplex, length: int | None = None) -> bool:
    if s.dim != 1:
        return False
    g = s.graph
    if any(len(nb) != 2 for nb in g.values()):
        return False
    if len(s.components()) != 1:
        return False
    return length is None or len(s.vertices) == length


@dataclass
class LinkReport:
    """Outcome of the counterexample-link checks, with witnesses for failures."""

    f_vector: list[int]
    euler_characteristic: int
    flag: bool
    flag_violation: list[str] | None
    links_six_cycles: bool
    bad_links: list[str] = field(default_factory=list)
    separating_simplex: list[str] | None = None
    empty_square: list[str] | None = None
    surface: bool = False
    surface_failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.flag
            and self.links_six_cycles
            and self.separating_simplex is None
            and self.empty_square is None
            and self.surface
        )

    def to_dict(self) -> dict[str, Any]:
        f = self.f_vector + [0] * (3 - len(self.f_vector))
        return {
            "counts": {"V": f[0], "E": f[1], "F": f[2]},
            "f_vector": self.f_vector,
            "euler_characteristic": self.euler_characteristic,
            "checks": {
                "flag": self.flag,
                "links_six_cycles": self.links_six_cycles,
                "no_separating_simplex": self.separating_simplex is None,
                "no_empty_square": self.empty_square is None,
                "surface": self.surface,
            },
            "witnesses": {
                "flag_violation": self.flag_violation,
                "bad_links": self.bad_links,
                "separating_simplex": self.separating_simplex,
                "empty_square": self.empty_square,
                "surface_failures": self.surface_failures,
            },
            "passed": self.passed,
        }


def validate_counterexample_link(L: SimplicialComplex) -> LinkReport:
    """Run every property the counterexample link is required to have."""
    flag, violation = is_flag(L)
    bad_links = [v for v in L.vertices if not _is_cycle_graph(L.link(v), 6)]

    surface_failures = []
    if L.dim != 2:
        surface_failures.append(f"dimension {L.dim}, expected 2")
    tri_count: dict[frozenset[str], int] = {}
    for s in L.simplices:
        if len(s) == 3:
            for e in combinations(s, 2):
                tri_count[frozenset(e)] = tri_count.get(frozenset(e), 0) + 1
    for e in L.faces(1):
        if tri_count.get(frozenset(e), 0) != 2:
            surface_failures.append(f"edge {'-'.join(e)} lies in {tri_count.get(frozenset(e), 0)} triangles")
    for v in L.vertices:
        if len(L.link(v).components()) != 1:
            surface_failures.append(f"link of {v} is disconnected")

    try:
        sep = find_separating_simplex(L)
    except DisconnectedInput:
        sep = ()
    empty = find_empty_square(L) if flag else None
    return LinkReport(
        f_vector=L.f_vector(),
        euler_characteristic=L.euler_characteristic(),
        flag=flag,
        flag_violation=list(violation) if violation else None,
        links_six_cycles=not bad_links,
        bad_links=bad_links,
        separating_simplex=list(sep) if sep is not None else None,
        empty_square=list(empty) if empty else None,
        surface=not surface_failures,
        surface_failures=surface_failures,
    )


# ---------------------------------------------------------------------------
# torus triangulations


def torus_triangulation(v1: tuple[int, int], v2: tuple[int, int]) -> SimplicialComplex:
    """Triangulated torus: the regular triangular lattice modulo ``<v1, v2>``.

    Lattice neighbours of ``(i, j)`` are ``(i±1, j)``, ``(i, j±1)`` and
    ``(i±1, j±1)``; triangles are ``{(i,j), (i+1,j), (i+1,j+1)}`` and
    ``{(i,j), (i,j+1), (i+1,j+1)}``.  The quotient has ``|det(v1, v2)|``
    vertices and twice as many triangles.  ``v1 = (8, 4)``, ``v2 = (4, 8)``
    glues the opposite sides of a hexagon of side 4 (96 triangles).
    """
    (a, b), (c, d) = v1, v2
    det = abs(a * d - b * c)
    if det == 0:
        raise ValueError("lattice vectors are linearly dependent")
    # Hermite basis (A, 0), (B, C) of the lattice
    C, x, y = _egcd(b, d)
    if C == 0:
        raise ValueError("degenerate lattice")
    w = (x * a + y * c, x * b + y * d)
    if w[1] < 0:
        w = (-w[0], -w[1])
    A = det // C
    B = w[0] % A

    def reduce(i: int, j: int) -> tuple[int, int]:
        k = j // C
        i -= k * B
        j -= k * C
        return i % A, j

    verts = [(i, j) for j in range(C) for i in range(A)]
    name = {v: f"t{v[0]}_{v[1]}" for v in verts}
    tris = set()
    for i, j in verts:
        for tri in (((0, 0), (1, 0), (1, 1)), ((0, 0), (0, 1), (1, 1))):
            tris.add(frozenset(name[reduce(i + di, j + dj)] for di, dj in tri))
    if any(len(t) != 3 for t in tris) or len(tris) != 2 * det:
        raise ValueError("lattice too small: the quotient is not a simplicial complex")
    return SimplicialComplex([name[v] for v in verts], tris)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


HEXAGON_96 = ((8, 4), (4, 8))
