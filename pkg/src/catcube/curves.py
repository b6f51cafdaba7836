"""Greedy covers, successor chains, bypasses and detours on a finite curve model.

A curve is a list of samples ``(t, point)`` with ``t`` rising from 0 to 1
through a finite metric space.  A trace circle is a cyclic sequence of
points; the points of the circle that the curve visits are its trace
points, each carrying the parameter at which the curve visits it.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import jsonschema
import numpy as np

from .complex import SCHEMA_VERSION
from .errors import NotACover, NotOnTrace, SchemaError

_EPS = 1e-12


@dataclass(frozen=True)
class CurveModel:
    points: tuple[str, ...]
    metric: np.ndarray
    samples: tuple[tuple[float, int], ...]
    first_visit: Mapping[int, float] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.metric, dtype=float)
        n = len(self.points)
        if m.shape != (n, n):
            raise ValueError(f"metric must be {n}x{n}")
        if (m < 0).any() or not np.allclose(m, m.T) or np.abs(np.diag(m)).max(initial=0) > _EPS:
            raise ValueError("metric must be symmetric, nonnegative and zero on the diagonal")
        for j in range(n):
            if (m > m[:, [j]] + m[[j], :] + 1e-9).any():
                raise ValueError(f"metric violates the triangle inequality through {self.points[j]!r}")
        m.setflags(write=False)
        object.__setattr__(self, "metric", m)
        ts = [t for t, _ in self.samples]
        # a single sample is the constant curve
        if not ts or ts[0] != 0 or (len(ts) > 1 and ts[-1] != 1) or any(a >= b for a, b in zip(ts, ts[1:])):
            raise ValueError("sample parameters must rise strictly from 0 to 1")
        for _, p in self.samples:
            if not 0 <= p < n:
                raise ValueError(f"sample point {p} out of range")
        first: dict[int, float] = {}
        for t, p in self.samples:
            first.setdefault(p, t)
        object.__setattr__(self, "first_visit", first)

    @classmethod
    def from_names(cls, points: Sequence[str], metric: Any, samples: Iterable[tuple[float, str]]) -> "CurveModel":
        idx = {p: i for i, p in enumerate(points)}
        try:
            s = tuple((float(t), idx[p]) for t, p in samples)
        except KeyError as exc:
            raise ValueError(f"unknown sample point {exc.args[0]!r}") from None
        return cls(tuple(points), np.asarray(metric, dtype=float), s)

    def param(self, point: int) -> float | None:
        """Parameter of the first visit to ``point``; ``None`` if never visited."""
        return self.first_visit.get(point)

    def diameter(self, pts: Iterable[int]) -> float:
        ix = list(set(pts))
        if len(ix) < 2:
            return 0.0
        return float(self.metric[np.ix_(ix, ix)].max())


@dataclass(frozen=True)
class Region:
    id: int
    members: frozenset[int]

    def diameter(self, curve: CurveModel) -> float:
        return curve.diameter(self.members)


# ---------------------------------------------------------------------------
# covers and chains


@dataclass(frozen=True)
class CoverResult:
    """Either ``chosen`` region ids or, on failure, the uncovered sample indices."""

    chosen: tuple[int, ...]
    uncovered: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.uncovered


def _covers(curve: CurveModel, regions: Iterable[Region]) -> np.ndarray:
    hit = np.zeros(len(curve.samples), dtype=bool)
    for r in regions:
        hit |= np.array([p in r.members for _, p in curve.samples], dtype=bool)
    return hit


def delta_cover(curve: CurveModel, regions: Sequence[Region], delta: float) -> CoverResult:
    """Inclusion-minimal family of regions of diameter ``< delta`` covering every sample.

    Starts from all small regions and drops redundant ones by decreasing id.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    small = sorted((r for r in regions if r.diameter(curve) < delta), key=lambda r: r.id)
    hit = _covers(curve, small)
    if not hit.all():
        return CoverResult((), tuple(np.flatnonzero(~hit).tolist()))
    counts = np.zeros(len(curve.samples), dtype=np.int64)
    masks = {}
    for r in small:
        masks[r.id] = np.array([p in r.members for _, p in curve.samples], dtype=bool)
        counts += masks[r.id]
    kept = set(masks)
    for rid in sorted(masks, reverse=True):
        if (counts[masks[rid]] > 1).all():
            counts -= masks[rid]
            kept.discard(rid)
    return CoverResult(tuple(sorted(kept)), ())


def _reach(curve: CurveModel, region: Region) -> float:
    return max((t for t, p in curve.samples if p in region.members), default=-1.0)


def successor_chain(curve: CurveModel, cover: Sequence[Region]) -> list[int]:
    """Region ids ``i0, i1, ...``: each step jumps from the farthest sample of
    the current region to the region through it that reaches farthest."""
    reach = {r.id: _reach(curve, r) for r in cover}

    def best(point: int) -> int | None:
        cands = [r.id for r in cover if point in r.members]
        if not cands:
            return None
        return max(cands, key=lambda i: (reach[i], -i))

    at = {t: p for t, p in curve.samples}
    cur = best(curve.samples[0][1])
    if cur is None:
        raise NotACover("no region contains the starting sample")
    chain = [cur]
    end = curve.samples[-1][0]
    while reach[cur] < end:
        nxt = best(at[reach[cur]])
        if nxt is None or reach[nxt] <= reach[cur]:
            raise NotACover(f"chain stalls at parameter {reach[cur]}")
        chain.append(nxt)
        cur = nxt
    return chain


# ---------------------------------------------------------------------------
# trace circles and bypasses


@dataclass(frozen=True)
class ArcSystem:
    """A trace circle: point ids in cyclic order, read against a curve."""

    curve: CurveModel
    circle: tuple[int, ...]
    params: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.circle)) != len(self.circle):
            raise ValueError("circle repeats a point")
        n = len(self.curve.points)
        for p in self.circle:
            if not 0 <= p < n:
                raise ValueError(f"circle point {p} out of range")
        params = np.array([self.curve.param(p) if self.curve.param(p) is not None else np.nan for p in self.circle])
        params.setflags(write=False)
        object.__setattr__(self, "params", params)

    @property
    def size(self) -> int:
        return len(self.circle)

    def is_trace(self, pos: int) -> bool:
        return not np.isnan(self.params[pos])

    def trace(self) -> list[int]:
        """Trace positions sorted by parameter."""
        pos = [i for i in range(self.size) if self.is_trace(i)]
        return sorted(pos, key=lambda i: self.params[i])

    def position(self, point: int) -> int:
        try:
            return self.circle.index(point)
        except ValueError:
            raise NotOnTrace(f"point {self.curve.points[point]!r} is not on the circle") from None

    def walk(self, start: int, direction: int, steps: int) -> list[int]:
        """Positions ``start, start+d, ...`` for ``steps`` steps (inclusive)."""
        return [(start + direction * s) % self.size for s in range(steps + 1)]

    def segment_diameter(self, start: int, direction: int, steps: int) -> float:
        return self.curve.diameter(self.circle[p] for p in self.walk(start, direction, steps))


@dataclass(frozen=True)
class Bypass:
    """Partition ``points[0] = x, ..., points[-1] = y`` of a segment walked in ``direction``."""

    direction: int
    points: tuple[int, ...]
    steps: tuple[int, ...]

    @property
    def x(self) -> int:
        return self.points[0]

    @property
    def y(self) -> int:
        return self.points[-1]

    @property
    def degenerate(self) -> bool:
        return len(self.points) == 1

    def span(self, arcs: ArcSystem) -> list[int]:
        """All circle positions covered by the segment ``[x, y]``."""
        return arcs.walk(self.x, self.direction, sum(self.steps))

    def to_dict(self, arcs: ArcSystem) -> dict[str, Any]:
        names = arcs.curve.points
        return {
            "x": names[arcs.circle[self.x]],
            "y": names[arcs.circle[self.y]],
            "direction": self.direction,
            "partition": [names[arcs.circle[p]] for p in self.points],
            "parameters": [float(arcs.params[p]) for p in self.points],
            "piece_diameters": [
                arcs.segment_diameter(p, self.direction, s) for p, s in zip(self.points, self.steps)
            ],
        }


def bypass_violations(arcs: ArcSystem, b: Bypass, delta: float) -> list[str]:
    """Check the partition conditions from the bypass fields alone."""
    out = []
    params = arcs.params
    if len(b.steps) != len(b.points) - 1:
        out.append("steps and points disagree")
        return out
    if sum(b.steps) >= arcs.size:
        out.append("segment wraps the whole circle")
    pos = b.x
    for i, s in enumerate(b.steps):
        if s <= 0:
            out.append(f"piece {i} is empty")
        nxt = (pos + b.direction * s) % arcs.size
        if nxt != b.points[i + 1]:
            out.append(f"piece {i} ends at {nxt}, not {b.points[i + 1]}")
        if arcs.segment_diameter(pos, b.direction, s) >= delta:
            out.append(f"piece {i} has diameter >= delta")
        for p in arcs.walk(pos, b.direction, s)[:-1]:
            if arcs.is_trace(p) and not params[p] < params[nxt]:
                out.append(f"trace point {p} in piece {i} has parameter >= the piece end")
        pos = nxt
    for p in b.points:
        if not arcs.is_trace(p):
            out.append(f"partition point {p} is off the trace")
    return out


def _best_in_direction(arcs: ArcSystem, x: int, d: int, delta: float) -> tuple[float, int, tuple[int, ...], tuple[int, ...]]:
    n = arcs.size
    params = arcs.params
    # BFS over partition endpoints, by number of pieces
    prev: dict[int, int] = {0: -1}
    depth = {0: 0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        pa = (x + d * a) % n
        ceiling = -np.inf  # max parameter over trace points in [a, b)
        diam_pts = [arcs.circle[pa]]
        for b in range(a + 1, n):
            pb = (x + d * b) % n
            prev_pos = (x + d * (b - 1)) % n
            if arcs.is_trace(prev_pos):
                ceiling = max(ceiling, params[prev_pos])
            diam_pts.append(arcs.circle[pb])
            if arcs.curve.diameter(diam_pts) >= delta:
                break  # diameters only grow with the segment
            if not arcs.is_trace(pb) or b in depth:
                continue
            if ceiling < params[pb]:
                depth[b] = depth[a] + 1
                prev[b] = a
                queue.append(b)
    best = max(depth, key=lambda o: (params[(x + d * o) % n], -depth[o]))
    chain = []
    o = best
    while o != -1:
        chain.append(o)
        o = prev[o]
    chain.reverse()
    pts = tuple((x + d * o) % n for o in chain)
    steps = tuple(b - a for a, b in zip(chain, chain[1:]))
    return float(params[pts[-1]]), depth[best], pts, steps


def maximal_bypass(arcs: ArcSystem, x: int, delta: float) -> Bypass:
    """A bypass from trace position ``x`` whose end parameter is as large as possible.

    Ties prefer fewer pieces, then the forward direction.
    """
    if not 0 <= x < arcs.size or not arcs.is_trace(x):
        raise NotOnTrace(f"position {x} is not a trace point")
    cands = []
    for d in (1, -1):
        top, k, pts, steps = _best_in_direction(arcs, x, d, delta)
        cands.append((top, -k, d == 1, Bypass(d, pts, steps)))
    return max(cands, key=lambda c: c[:3])[3]


@dataclass(frozen=True)
class Detour:
    bypasses: tuple[Bypass, ...]
    steps: int

    def to_dict(self, arcs: ArcSystem, delta: float) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "delta": delta,
            "bypasses": [b.to_dict(arcs) for b in self.bypasses],
            "greedy_steps": self.steps,
            "checks": detour_checks(arcs, self, delta),
        }


def covering_detour(arcs: ArcSystem, delta: float) -> Detour:
    """Repeatedly take the least uncovered trace parameter and bypass it maximally."""
    params = arcs.params
    pending = arcs.trace()
    out = []
    steps = 0
    while pending:
        steps += 1
        b = maximal_bypass(arcs, pending[0], delta)
        lo, hi = params[b.x], params[b.y]
        pending = [p for p in pending if not lo <= params[p] <= hi]
        out.append(b)
    return Detour(tuple(out), steps)


def detour_checks(arcs: ArcSystem, detour: Detour, delta: float) -> dict[str, bool]:
    params = arcs.params
    bs = detour.bypasses
    covering = all(
        any(params[b.x] <= params[p] <= params[b.y] for b in bs) for p in arcs.trace()
    )
    ordered = all(
        params[a.y] < params[b.x] or params[b.y] < params[a.x]
        for i, a in enumerate(bs)
        for b in bs[i + 1 :]
    )
    spans = [set(b.span(arcs)) for b in bs]
    disjoint = all(not spans[i] & spans[j] for i in range(len(bs)) for j in range(i + 1, len(bs)))
    valid = all(not bypass_violations(arcs, b, delta) for b in bs)
    return {"covering": covering, "parameter_ordered": ordered, "arc_disjoint": disjoint, "bypasses_valid": valid}


# ---------------------------------------------------------------------------
# JSON


CURVE_SCHEMA = {
    "type": "object",
    "required": ["points", "metric", "samples"],
    "properties": {
        "points": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "metric": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "samples": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"type": "number"}, {"type": "string"}],
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "regions": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
    },
}

ARCS_SCHEMA = {
    "type": "object",
    "required": ["circle"],
    "properties": {"circle": {"type": "array", "items": {"type": "string"}}},
}


def _load(document: str | bytes | Mapping[str, Any], schema: Mapping[str, Any], what: str) -> Mapping[str, Any]:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{what} is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{what}: {exc.message}") from None
    return document


def load_curve(document: str | bytes | Mapping[str, Any]) -> CurveModel:
    doc = _load(document, CURVE_SCHEMA, "curve")
    try:
        return CurveModel.from_names(doc["points"], doc["metric"], doc["samples"])
    except ValueError as exc:
        raise SchemaError(f"curve: {exc}") from None


def load_regions(document: str | bytes | Mapping[str, Any], curve: CurveModel) -> list[Region]:
    doc = _load(document, CURVE_SCHEMA, "curve")
    idx = {p: i for i, p in enumerate(curve.points)}
    return [Region(i, frozenset(idx[p] for p in r)) for i, r in enumerate(doc.get("regions", []))]


def load_arcs(document: str | bytes | Mapping[str, Any], curve: CurveModel) -> ArcSystem:
    doc = _load(document, ARCS_SCHEMA, "arcs")
    idx = {p: i for i, p in enumerate(curve.points)}
    try:
        return ArcSystem(curve, tuple(idx[p] for p in doc["circle"]))
    except KeyError as exc:
        raise SchemaError(f"arcs: unknown point {exc.args[0]!r}") from None
    except ValueError as exc:
        raise SchemaError(f"arcs: {exc}") from None


def curve_to_dict(curve: CurveModel) -> dict[str, Any]:
    return {
        "points": list(curve.points),
        "metric": curve.metric.tolist(),
        "samples": [[t, curve.points[p]] for t, p in curve.samples],
    }


def random_arc_system(rng: random.Random, max_circle: int = 12) -> tuple[ArcSystem, float]:
    """A random planar point set, a curve through some of it and a circle on part of it."""
    n = rng.randint(1, max_circle)
    extra = rng.randint(0, 6)
    pts = np.array([(rng.random(), rng.random()) for _ in range(n + extra)])
    metric = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
    names = tuple(f"q{i}" for i in range(n + extra))
    k = rng.randint(1, n + extra)
    order = rng.sample(range(n + extra), k)
    ts = [0.0] + sorted(rng.random() for _ in range(k - 2)) + ([1.0] if k > 1 else [])
    curve = CurveModel(names, metric, tuple(zip(ts, order)))
    circle = list(range(n))
    rng.shuffle(circle)
    return ArcSystem(curve, tuple(circle)), rng.uniform(0.05, 0.8)
