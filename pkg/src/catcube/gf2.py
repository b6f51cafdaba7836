"""Sparse linear systems over Z/2.

Rows are assembled as sorted column-index tuples and eliminated as Python
integer bitsets.  A stored pivot row is shifted so that its pivot column is
bit 0, which keeps the integers as short as the row's span rather than the
column universe.  Pivots are always the least column of the reduced row, and
free variables are 0 in the returned solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components


@dataclass(frozen=True)
class Gf2System:
    """Equations ``sum(x[c] for c in rows[i]) == rhs[i]`` over ``n_cols`` unknowns."""

    n_cols: int
    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]

    @classmethod
    def build(cls, n_cols: int, rows: Iterable[Iterable[int]], rhs: Iterable[int]) -> "Gf2System":
        """Validate and normalize: repeated indices in a row cancel in pairs."""
        out_rows = []
        for r in rows:
            t = tuple(int(c) for c in r)
            if t and (min(t) < 0 or max(t) >= n_cols):
                bad = min(t) if min(t) < 0 else max(t)
                raise ValueError(f"column {bad} outside 0..{n_cols - 1}")
            if len(t) == 2 and t[0] != t[1]:
                out_rows.append(t if t[0] < t[1] else (t[1], t[0]))
                continue
            odd: set[int] = set()
            for c in t:
                odd ^= {c}
            out_rows.append(tuple(sorted(odd)))
        out_rhs = tuple(int(b) & 1 for b in rhs)
        if len(out_rhs) != len(out_rows):
            raise ValueError("rows and rhs differ in length")
        return cls(n_cols, tuple(out_rows), out_rhs)

    @classmethod
    def from_pairs(cls, n_cols: int, pairs: Any, rhs: Any) -> "Gf2System":
        """Rows of exactly two distinct unknowns, given as an ``(m, 2)`` array."""
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        b = np.asarray(rhs, dtype=np.int64).reshape(-1)
        if len(b) != len(arr):
            raise ValueError("rows and rhs differ in length")
        if len(arr) and (arr.min() < 0 or arr.max() >= n_cols):
            raise ValueError(f"column outside 0..{n_cols - 1}")
        if (arr[:, 0] == arr[:, 1]).any():
            return cls.build(n_cols, arr.tolist(), b.tolist())
        arr = np.sort(arr, axis=1)
        return cls(n_cols, tuple(map(tuple, arr.tolist())), tuple((b & 1).tolist()))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def residual(self, x: Sequence[int] | np.ndarray) -> list[int]:
        """Indices of rows that ``x`` violates."""
        xs = np.asarray(x, dtype=np.int64)
        if not self.rows:
            return []
        lens = np.fromiter(map(len, self.rows), dtype=np.int64, count=len(self.rows))
        flat = np.fromiter(chain.from_iterable(self.rows), dtype=np.int64, count=int(lens.sum()))
        row_of = np.repeat(np.arange(len(self.rows)), lens)
        sums = np.zeros(len(self.rows), dtype=np.int64)
        np.add.at(sums, row_of, xs[flat])
        return np.flatnonzero((sums & 1) != np.asarray(self.rhs, dtype=np.int64)).tolist()

    def dump(self) -> str:
        """One line per row: ``rowIdx: c1 c2 ... | b``."""
        return "".join(
            f"{i}: {' '.join(map(str, r))} | {b}\n" for i, (r, b) in enumerate(zip(self.rows, self.rhs))
        )


@dataclass(frozen=True)
class Solution:
    x: np.ndarray
    rank: int

    def __post_init__(self) -> None:
        self.x.setflags(write=False)


@dataclass(frozen=True)
class Inconsistency:
    """Rows whose sum reads ``0 = 1``."""

    rows: tuple[int, ...]

    def check(self, system: Gf2System) -> bool:
        acc: set[int] = set()
        b = 0
        for i in self.rows:
            acc ^= set(system.rows[i])
            b ^= system.rhs[i]
        return not acc and b == 1


def parse_dump(text: str) -> Gf2System:
    rows, rhs, n = [], [], 0
    for line in text.splitlines():
        if not line.strip():
            continue
        _, rest = line.split(":", 1)
        cols, b = rest.split("|")
        r = [int(c) for c in cols.split()]
        n = max([n, *(c + 1 for c in r)])
        rows.append(r)
        rhs.append(int(b))
    return Gf2System.build(n, rows, rhs)


# ---------------------------------------------------------------------------
# elimination


def _row_bits(cols: Sequence[int]) -> tuple[int, int]:
    base = cols[0]
    bits = 0
    for c in cols:
        bits |= 1 << (c - base)
    return base, bits


class _Echelon:
    """Pivot rows keyed by pivot column, each stored relative to its pivot."""

    def __init__(self, track: bool):
        self.pivots: dict[int, tuple[int, int, int]] = {}
        self.track = track

    def insert(self, base: int, bits: int, b: int, tag: int) -> tuple[int, int] | None:
        """Reduce a row and store it; return ``(b, tag)`` if it reduced to zero."""
        pivots = self.pivots
        while bits:
            low = (bits & -bits).bit_length() - 1
            if low:
                bits >>= low
                base += low
            hit = pivots.get(base)
            if hit is None:
                pivots[base] = (bits, b, tag)
                return None
            pbits, pb, ptag = hit
            bits ^= pbits
            b ^= pb
            if self.track:
                tag ^= ptag
        return b, tag


def _eliminate(system: Gf2System, track: bool) -> tuple[_Echelon, tuple[int, ...] | None]:
    ech = _Echelon(track)
    for i, (r, b) in enumerate(zip(system.rows, system.rhs)):
        if not r:
            if b:
                return ech, (i,)
            continue
        base, bits = _row_bits(r)
        left = ech.insert(base, bits, b, 1 << i if track else 0)
        if left is not None and left[0]:
            if not track:
                return ech, ()
            tag = left[1]
            return ech, tuple(j for j in range(tag.bit_length()) if (tag >> j) & 1)
    return ech, None


def _back_substitute(ech: _Echelon, n_cols: int, rhs_override: dict[int, int] | None = None, free: dict[int, int] | None = None) -> int:
    """Solve the echelon form from the highest pivot down; returns ``x`` as an int bitset."""
    x = 0
    if free:
        for c, v in free.items():
            if v:
                x |= 1 << c
    for p in sorted(ech.pivots, reverse=True):
        bits, b, _ = ech.pivots[p]
        if rhs_override is not None:
            b = rhs_override.get(p, 0)
        # bit 0 of bits is x[p] itself, which is still 0 here
        if (bits & (x >> p)).bit_count() & 1:
            b ^= 1
        if b:
            x |= 1 << p
    return x


def _to_array(x: int, n: int) -> np.ndarray:
    raw = x.to_bytes((n + 7) // 8 or 1, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].copy()


# ---------------------------------------------------------------------------
# graph-shaped systems (every row has at most two unknowns)


def _solve_pairs(system: Gf2System) -> Solution | Inconsistency:
    """Each row ``x[u] + x[v] = b`` is an edge; single-variable rows join a
    ground vertex pinned to 0.  Every component is rooted at its largest
    column, which is the free one, and solved along a BFS forest."""
    n = system.n_cols
    ground, source = n, n + 1
    for i, (r, b) in enumerate(zip(system.rows, system.rhs)):
        if not r and b:
            return Inconsistency((i,))
    ids = np.array([i for i, r in enumerate(system.rows) if r], dtype=np.int64)
    u = np.array([system.rows[i][0] for i in ids], dtype=np.int64)
    v = np.array([system.rows[i][1] if len(system.rows[i]) == 2 else ground for i in ids], dtype=np.int64)
    b = np.array([system.rhs[i] for i in ids], dtype=np.uint8)
    n_comp, labels = connected_components(
        coo_matrix((np.ones(len(ids)), (u, v)), shape=(n + 1, n + 1)), directed=False
    )
    root = np.full(n_comp, -1, dtype=np.int64)
    np.maximum.at(root, labels, np.arange(n + 1))
    # a source joined to every root turns the forest into one BFS tree
    su = np.concatenate([u, np.full(n_comp, source)])
    sv = np.concatenate([v, root])
    tree = coo_matrix((np.ones(len(su)), (su, sv)), shape=(n + 2, n + 2)).tocsr()
    order, pred = breadth_first_order(tree, source, directed=False, return_predecessors=True)
    # row of each tree edge: first row with those endpoints
    width = n + 2
    keys = np.minimum(u, v) * width + np.maximum(u, v)
    uniq, first = np.unique(keys, return_index=True)
    pred[source] = source
    acc = np.zeros(n + 2, dtype=np.uint8)
    anc = pred.copy()
    child = np.flatnonzero((pred != source) & (np.arange(n + 2) != source))
    ck = np.minimum(pred[child], child) * width + np.maximum(pred[child], child)
    tree_row = np.full(n + 2, -1, dtype=np.int64)
    tree_row[child] = first[np.searchsorted(uniq, ck)]
    acc[child] = b[tree_row[child]]
    # pointer doubling: acc[w] becomes the parity from w up to its root
    while (anc != source).any():
        acc = acc ^ acc[anc]
        anc = anc[anc]
    bad = np.flatnonzero((acc[u] ^ acc[v]) != b)
    if len(bad):
        j = int(bad[0])
        path = _tree_path(pred, tree_row, int(u[j]), int(v[j]), source)
        return Inconsistency(tuple(sorted({int(ids[k]) for k in path} | {int(ids[j])})))
    return Solution(acc[:n].copy(), n + 1 - n_comp)


def _tree_path(pred: np.ndarray, tree_row: np.ndarray, s: int, t: int, source: int) -> list[int]:
    """Local row indices along the forest path from ``s`` to ``t``."""

    def climb(w: int) -> list[int]:
        out = [w]
        while pred[w] != source:
            w = int(pred[w])
            out.append(w)
        return out

    ps, pt = climb(s), climb(t)
    # drop the shared tail above the meeting point
    while len(ps) > 1 and len(pt) > 1 and ps[-2] == pt[-2]:
        ps.pop()
        pt.pop()
    return [int(tree_row[w]) for w in ps[:-1] + pt[:-1]]


# ---------------------------------------------------------------------------
# public API


# below this many rows, plain elimination beats the array setup of the graph path
GRAPH_PATH_MIN_ROWS = 256


def _graph_shaped(system: Gf2System) -> bool:
    return system.n_rows >= GRAPH_PATH_MIN_ROWS and all(len(r) <= 2 for r in system.rows)


def solve(system: Gf2System, verify: bool = False) -> Solution | Inconsistency:
    """A solution with free variables 0, or a certificate of inconsistency.

    ``verify`` re-substitutes the answer (or re-sums the certificate) and
    raises ``AssertionError`` if it does not hold.
    """
    if _graph_shaped(system):
        out = _solve_pairs(system)
    else:
        ech, bad = _eliminate(system, track=False)
        if bad is None:
            out = Solution(_to_array(_back_substitute(ech, system.n_cols), system.n_cols), len(ech.pivots))
        elif bad:
            out = Inconsistency(bad)
        else:
            _, cert = _eliminate(system, track=True)
            out = Inconsistency(cert)
    if verify:
        if isinstance(out, Solution):
            assert not system.residual(out.x), "solution fails re-substitution"
        else:
            assert out.check(system), "certificate does not sum to 0 = 1"
    return out


def rank(system: Gf2System) -> int:
    ech = _Echelon(False)
    for r in system.rows:
        if r:
            ech.insert(*_row_bits(r), 0, 0)
    return len(ech.pivots)


def kernel_basis(system: Gf2System) -> list[np.ndarray]:
    """Basis of ``{x : A x = 0}``, one vector per free column (ascending)."""
    if _graph_shaped(system):
        return _kernel_pairs(system)
    ech = _Echelon(False)
    for r in system.rows:
        if r:
            ech.insert(*_row_bits(r), 0, 0)
    free_cols = [c for c in range(system.n_cols) if c not in ech.pivots]
    zero = {p: 0 for p in ech.pivots}
    basis = []
    for f in free_cols:
        x = _back_substitute(ech, system.n_cols, rhs_override=zero, free={f: 1})
        basis.append(_to_array(x, system.n_cols))
    return basis


def _kernel_pairs(system: Gf2System) -> list[np.ndarray]:
    # the free column of a component is its largest; its kernel vector is the
    # component's indicator, unless a one-variable row pins it to ground
    n = system.n_cols
    rows = [r for r in system.rows if r]
    u = np.array([r[0] for r in rows], dtype=np.int64)
    v = np.array([r[1] if len(r) == 2 else n for r in rows], dtype=np.int64)
    n_comp, labels = connected_components(
        coo_matrix((np.ones(len(rows)), (u, v)), shape=(n + 1, n + 1)), directed=False
    )
    root = np.full(n_comp, -1, dtype=np.int64)
    np.maximum.at(root, labels, np.arange(n + 1))
    basis = []
    for lab in np.argsort(root):
        if root[lab] == n:
            continue
        basis.append((labels[:n] == lab).astype(np.uint8))
    return basis
