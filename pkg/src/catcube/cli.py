"""Command-line front end.

Every command reads JSON, writes JSON carrying ``schema_version`` and can
record a run manifest with content hashes of its inputs and outputs.  A
path of ``-`` means stdin or stdout.  Module errors exit with their own
code (see :mod:`catcube.errors`).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .complex import SCHEMA_VERSION, ScaleParams, check_npc, load_complex, load_simplicial
from .curves import covering_detour, detour_checks, load_arcs, load_curve, random_arc_system
from .errors import CatCubeError, NoCoboundary, NonSeparating, SchemaError
from .grid import (
    CoboundaryObstruction,
    assemble_cocycle,
    connector_census,
    delta_parity,
    load_grid,
    solve_parity,
    validate_grid,
    verify_cocycle,
)
from .hyperplanes import crossing_graph, halfspaces, hyperplanes, to_dot
from .racg import DEFAULT_CAP, HEXAGON_96, RacgPresentation, davis_ball, torus_triangulation, validate_counterexample_link


@dataclass
class RunManifest:
    command: str
    parameters: dict[str, Any]
    inputs: list[dict[str, str]] = field(default_factory=list)
    outputs: list[dict[str, str]] = field(default_factory=list)
    tool_version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "tool_version": self.tool_version,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class _Io:
    """Reads and writes through one place so the manifest sees every byte."""

    def __init__(self, command: str, parameters: dict[str, Any]):
        self.manifest = RunManifest(command, parameters)

    def read(self, path: str) -> bytes:
        data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
        self.manifest.inputs.append({"path": path, "sha256": _sha256(data)})
        return data

    def write(self, path: str, doc: dict[str, Any] | str) -> None:
        text = doc if isinstance(doc, str) else json.dumps(doc, sort_keys=True, indent=2) + "\n"
        data = text.encode()
        if path == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            Path(path).write_bytes(data)
        self.manifest.outputs.append({"path": path, "sha256": _sha256(data)})


def _scale(args: argparse.Namespace, default_x0: str | None) -> ScaleParams:
    x0 = args.x0 or default_x0
    if x0 is None:
        raise SchemaError("no basepoint: pass --x0 or give the complex a basepoint")
    try:
        return ScaleParams(x0, args.R0, args.R1, args.R)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _with_version(doc: dict[str, Any]) -> dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, **doc}


# ---------------------------------------------------------------------------
# commands


def cmd_davis(args: argparse.Namespace, io: _Io) -> int:
    L = load_simplicial(io.read(args.link))
    cx = davis_ball(RacgPresentation(L), args.radius, cap=args.cap)
    io.write(args.output, _with_version(cx.to_dict()))
    return 0


def cmd_analyze(args: argparse.Namespace, io: _Io) -> int:
    cx = load_complex(io.read(args.complex))
    names = cx.vertices
    hs = []
    for hp in hyperplanes(cx):
        item: dict[str, Any] = {
            "id": hp.id,
            "edges": [[names[u], names[v]] for u, v in (cx.edges[e] for e in hp.edges)],
        }
        try:
            sides = halfspaces(cx, hp.id)
        except NonSeparating as exc:
            item["separating"] = False
            item["error"] = str(exc)
        else:
            item["separating"] = True
            item["side_sizes"] = [len(sides.side0), len(sides.side1)]
            item["halfspace"] = [1 if v in sides.side1 else 0 for v in range(cx.n_vertices)]
        hs.append(item)
    g = crossing_graph(cx)
    npc = check_npc(cx)
    doc = {
        "counts": cx.counts(),
        "hyperplanes": hs,
        "crossing_graph": sorted(sorted(e) for e in g.edges),
        "npc": npc.to_dict(),
    }
    io.write(args.output, _with_version(doc))
    if args.dot:
        io.write(args.dot, to_dot(cx))
    return 0


def cmd_parity(args: argparse.Namespace, io: _Io) -> int:
    cx = load_complex(io.read(args.complex))
    grid = load_grid(io.read(args.grid))
    if any(v is not None for v in (args.x0, args.R0_given, args.R1, args.R)):
        sc = grid.scale
        try:
            scale = ScaleParams(
                args.x0 or sc.x0,
                args.R0 if args.R0_given is not None else sc.R0,
                args.R1 if args.R1 is not None else sc.R1,
                args.R if args.R is not None else sc.R,
            )
        except ValueError as exc:
            raise SchemaError(str(exc)) from None
        grid = type(grid)(grid.hyperplanes, grid.connectors, scale, grid.orientation_seed)
    validate_grid(cx, grid)
    alpha = assemble_cocycle(cx, grid)
    violations = verify_cocycle(cx, alpha)
    result = solve_parity(cx, alpha, grid.scale)
    doc: dict[str, Any] = {
        "grid": grid.to_dict(),
        "cocycle": alpha.to_dict(cx),
        "cocycle_violations": violations,
    }
    if isinstance(result, CoboundaryObstruction):
        doc.update(result.to_dict(cx))
        io.write(args.output, _with_version(doc))
        raise NoCoboundary(
            f"cocycle is not a coboundary beyond radius {grid.scale.R}; certificate written to {args.output}",
            certificate=list(result.edges),
        )
    doc["parity"] = result.to_dict()
    doc["x"], doc["y"] = args.x, args.y
    doc["delta"] = delta_parity(result, args.x, args.y)
    io.write(args.output, _with_version(doc))
    return 0


def cmd_census(args: argparse.Namespace, io: _Io) -> int:
    cx = load_complex(io.read(args.complex))
    census = connector_census(cx, _scale(args, cx.basepoint))
    full = census.to_dict()
    summary = {
        "schema_version": SCHEMA_VERSION,
        "histogram": full["histogram"],
        "pairs_typed": len(census.pairs),
        "components_typed": sum(len(r["types"]) for r in census.pairs),
        "pairs_without_horizon": len(census.failures),
    }
    io.write(args.output, summary)
    if args.detail:
        io.write(args.detail, full)
    return 0


def cmd_detour(args: argparse.Namespace, io: _Io) -> int:
    if args.random:
        return _detour_trials(args, io)
    if not args.curve or not args.arcs:
        raise SchemaError("detour needs CURVE and ARCS paths (or --random N)")
    curve = load_curve(io.read(args.curve))
    arcs = load_arcs(io.read(args.arcs), curve)
    det = covering_detour(arcs, args.delta)
    io.write(args.output, det.to_dict(arcs, args.delta))
    return 0


def _detour_trials(args: argparse.Namespace, io: _Io) -> int:
    rng = random.Random(args.seed)
    failures = []
    for i in range(args.random):
        arcs, delta = random_arc_system(rng)
        checks = detour_checks(arcs, covering_detour(arcs, delta), delta)
        if not all(checks.values()):
            failures.append({"trial": i, "checks": checks})
    summary = {"schema_version": SCHEMA_VERSION, "trials": args.random, "seed": args.seed, "failures": failures}
    io.write(args.output, summary)
    return 0 if not failures else 1


def cmd_validate_link(args: argparse.Namespace, io: _Io) -> int:
    L = load_simplicial(io.read(args.link))
    report = validate_counterexample_link(L)
    io.write(args.output, _with_version(report.to_dict()))
    return 0


def cmd_gen_torus(args: argparse.Namespace, io: _Io) -> int:
    L = torus_triangulation(tuple(args.v1), tuple(args.v2))
    io.write(args.output, _with_version(L.to_dict()))
    return 0


# ---------------------------------------------------------------------------
# parser


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated integers, got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catcube", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default="-", help="output path (default: stdout)")
    common.add_argument("--manifest", help="write a run manifest to this path")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized drivers (default 0)")
    scale = argparse.ArgumentParser(add_help=False)
    scale.add_argument("--x0", help="basepoint (default: the complex's basepoint)")
    scale.add_argument("--R0", type=int, default=None, help="connector exclusion radius (default 1)")
    scale.add_argument("--R1", type=int, default=None, help="orientation radius (default R0+1)")
    scale.add_argument("--R", type=int, default=None, help="parity radius (default R1+1)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("davis", parents=[common], help="ball in the Davis complex of a flag link")
    s.add_argument("link")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"vertex cap (default {DEFAULT_CAP})")
    s.set_defaults(func=cmd_davis)

    s = sub.add_parser("analyze", parents=[common], help="hyperplanes, halfspaces, crossings, NPC check")
    s.add_argument("complex")
    s.add_argument("--dot", help="also write the 1-skeleton as Graphviz DOT")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("parity", parents=[common, scale], help="grid cocycle, parity function and its difference")
    s.add_argument("complex")
    s.add_argument("grid")
    s.add_argument("--x", required=True, help="first vertex")
    s.add_argument("--y", required=True, help="second vertex")
    s.set_defaults(func=cmd_parity)

    s = sub.add_parser("census", parents=[common, scale], help="histogram of connector types")
    s.add_argument("complex")
    s.add_argument("--detail", help="write per-pair types here")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("detour", parents=[common], help="greedy covering detour of a trace circle")
    s.add_argument("curve", nargs="?")
    s.add_argument("arcs", nargs="?")
    s.add_argument("--delta", type=float, default=0.5, help="diameter bound (default 0.5)")
    s.add_argument("--random", type=int, default=0, metavar="N",
                   help="instead check N random instances drawn with --seed")
    s.set_defaults(func=cmd_detour)

    s = sub.add_parser("validate-link", parents=[common], help="check the counterexample link properties")
    s.add_argument("link")
    s.set_defaults(func=cmd_validate_link)

    s = sub.add_parser("gen-torus", parents=[common], help="triangulated torus from the triangular lattice")
    s.add_argument("--v1", type=_pair, default=HEXAGON_96[0], help="first period (default 8,4)")
    s.add_argument("--v2", type=_pair, default=HEXAGON_96[1], help="second period (default 4,8)")
    s.set_defaults(func=cmd_gen_torus)
    return p


def _parameters(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"func", "command", "output", "manifest", "dot", "detail", "R0_given"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "R0"):
        args.R0_given = args.R0
        if args.R0 is None:
            args.R0 = 1
    io = _Io(args.command, _parameters(args))
    try:
        code = args.func(args, io)
    except CatCubeError as exc:
        print(f"catcube {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = exc.exit_code
    except OSError as exc:
        print(f"catcube {args.command}: {exc}", file=sys.stderr)
        code = 2
    if args.manifest:
        doc = io.manifest.to_dict()
        doc["exit_code"] = code
        Path(args.manifest).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
