# -*- coding: utf-8 -*-
"""
feedlink command line
=====================

    feedlink [solve] --input square.json [--output report.json] [--svg out.svg]
    feedlink oracle  --input square.json [--grid-density K] [--threads N]
    feedlink states  --input square.json
    feedlink check   --input square.json [--grid-density K] [--tolerance EPS]
    feedlink profile --input square.json [--grid-density K]

Input is a JSON document ``{"polygon": [[x, y], ...], "point": [x, y]}`` or,
with ``--format plain``, one ``x y`` pair per line with the point last as
``p: x y``. Exit codes: 1 unreadable input or bad option, 2 invalid geometry, 3 failed
check, 4 internal sweep failure.
"""

from __future__ import annotations
import argparse, json, logging, os, sys, time
from dataclasses import asdict, dataclass
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import FeedLinkError, GeometryError, InputFormatError
from .geom_core import PolygonChain, build_chain, point_at
from .merge import Solution, dilation_profile, solve
from .oracle import OracleConfig, dilation_via, grid_best
from .render import render_plot_svg, render_polygon_svg

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

COMMANDS = ("solve", "oracle", "states", "check", "profile")

EXIT_OK, EXIT_INPUT, EXIT_GEOMETRY, EXIT_CHECK, EXIT_INTERNAL = 0, 1, 2, 3, 4


class CheckFailed(FeedLinkError):
    pass


@dataclass(frozen=True)
class ProblemInput:
    polygon: List[Tuple[float, float]]
    point: Tuple[float, float]


@dataclass(frozen=True)
class SolveReport:
    t_star: float
    q: List[float]
    dilation: float
    witness: List[float]
    perimeter: float
    n: int
    event_count_left: int
    event_count_right: int
    elapsed_ms: float

    @classmethod
    def from_solution(cls, sol: Solution, elapsed_ms: float) -> "SolveReport":
        res = sol.result
        return cls(
            t_star=res.t_star,
            q=[res.q.x, res.q.y],
            dilation=res.dilation,
            witness=[res.witness.x, res.witness.y],
            perimeter=sol.chain.perimeter,
            n=sol.chain.n,
            event_count_left=sol.left.seq.event_count,
            event_count_right=sol.right.seq.event_count,
            elapsed_ms=elapsed_ms,
        )


# ----------------- input -----------------

def _pair(raw: Any, what: str) -> Tuple[float, float]:
    try:
        x, y = raw
        return float(x), float(y)
    except (TypeError, ValueError) as e:
        raise InputFormatError(f"{what} must be an [x, y] pair, got {raw!r}") from e


def parse_json(text: str) -> ProblemInput:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "polygon" not in doc or "point" not in doc:
        raise InputFormatError('Expected an object with keys "polygon" and "point"')
    if not isinstance(doc["polygon"], list):
        raise InputFormatError('"polygon" must be a list of [x, y] pairs')
    poly = [_pair(v, f"polygon[{k}]") for k, v in enumerate(doc["polygon"])]
    return ProblemInput(poly, _pair(doc["point"], "point"))


def parse_plain(text: str) -> ProblemInput:
    poly: List[Tuple[float, float]] = []
    point: Optional[Tuple[float, float]] = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if point is not None:
            raise InputFormatError(f"line {lineno}: nothing may follow the 'p:' line")
        if line.startswith("p:"):
            point = _pair(line[2:].split(), f"line {lineno}")
        else:
            poly.append(_pair(line.split(), f"line {lineno}"))
    if point is None:
        raise InputFormatError("Missing final 'p: x y' line")
    return ProblemInput(poly, point)


def load_problem(path: str, fmt: str = "json") -> ProblemInput:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    problem = parse_plain(text) if fmt == "plain" else parse_json(text)
    if len(problem.polygon) < 3:
        raise InputFormatError(f"Polygon needs at least 3 vertices, got {len(problem.polygon)}")
    return problem


# ----------------- output -----------------

def _dumps(record: Dict[str, Any]) -> str:
    # json writes floats with repr(): shortest round-trip form
    return json.dumps(record, ensure_ascii=False, allow_nan=False)


def write_text(path: Optional[str], text: str) -> None:
    """Write to ``path`` atomically, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
    os.replace(tmp, path)


def _lines(records: Iterable[Dict[str, Any]]) -> str:
    return "".join(_dumps(r) + "\n" for r in records)


# ----------------- commands -----------------

def _solve(chain: PolygonChain, args: argparse.Namespace) -> Tuple[Solution, float]:
    trace_file: Optional[IO[str]] = None
    try:
        if args.trace:
            trace_file = open(args.trace, "w", encoding="utf-8")
        sink = (lambda rec: trace_file.write(_dumps(rec) + "\n")) if trace_file else None
        start = time.perf_counter()
        sol = solve(chain, DEFAULT_CONFIG, sink)
        elapsed = (time.perf_counter() - start) * 1000.0
    finally:
        if trace_file is not None:
            trace_file.close()
    if args.svg:
        render_polygon_svg(sol, args.svg)
    if args.plot_svg:
        render_plot_svg(sol, args.plot_svg)
    return sol, elapsed


def _oracle_cfg(args: argparse.Namespace) -> OracleConfig:
    return OracleConfig(q_samples=args.grid_density, threads=args.threads)


def cmd_solve(chain: PolygonChain, args: argparse.Namespace) -> int:
    sol, elapsed = _solve(chain, args)
    report = SolveReport.from_solution(sol, elapsed)
    write_text(args.output, json.dumps(asdict(report), indent=2) + "\n")
    return EXIT_OK


def cmd_oracle(chain: PolygonChain, args: argparse.Namespace) -> int:
    cfg = _oracle_cfg(args)
    t, value = grid_best(chain, cfg)
    q = point_at(chain, t)
    record = {"t_best": t, "q": [q.x, q.y], "dilation": value, "samples": cfg.samples_for(chain.n)}
    write_text(args.output, json.dumps(record, indent=2) + "\n")
    return EXIT_OK


def _state_records(sol: Solution) -> List[Dict[str, Any]]:
    out: List[Dict[str, Any]] = []
    for t, state in sol.left.seq.entries:
        out.append({"side": "left", "t": t, "state": str(state)})
    mu = sol.chain.perimeter
    for t, state in sol.right.seq.entries:
        out.append({"side": "right", "t": (mu - t) % mu, "state": str(state)})
    for side, pipe in (("left", sol.left), ("right", sol.right)):
        for rp in pipe.retargets:
            out.append({"side": f"{side}-retarget", "x": rp.x, "dest": rp.dest,
                        "dest_before": rp.dest_before, "kind": rp.kind.value})
    return out


def cmd_states(chain: PolygonChain, args: argparse.Namespace) -> int:
    sol, _ = _solve(chain, args)
    write_text(args.output, _lines(_state_records(sol)))
    return EXIT_OK


def cmd_check(chain: PolygonChain, args: argparse.Namespace) -> int:
    sol, _ = _solve(chain, args)
    res = sol.result
    breakpoints = sol.left.breakpoints() + sol.right.breakpoints()
    t_grid, grid_value = grid_best(chain, _oracle_cfg(args), breakpoints)
    recheck, _ = dilation_via(chain, res.t_star)
    tol = args.tolerance
    record = {
        "dilation": res.dilation,
        "t_star": res.t_star,
        "oracle_dilation": grid_value,
        "oracle_t": t_grid,
        "recheck": recheck,
        "relative_gap": abs(res.dilation - grid_value) / grid_value,
        "ok": True,
    }
    problems = []
    if res.dilation > grid_value * (1.0 + tol):
        problems.append(f"solver dilation {res.dilation!r} worse than grid {grid_value!r}")
    if abs(recheck - res.dilation) > tol * res.dilation:
        problems.append(f"dilation via t*={res.t_star!r} is {recheck!r}, reported {res.dilation!r}")
    record["ok"] = not problems
    write_text(args.output, json.dumps(record, indent=2) + "\n")
    if problems:
        raise CheckFailed("; ".join(problems))
    return EXIT_OK


def cmd_profile(chain: PolygonChain, args: argparse.Namespace) -> int:
    sol, _ = _solve(chain, args)
    count = _oracle_cfg(args).samples_for(chain.n)
    ts = np.linspace(0.0, chain.perimeter, count, endpoint=False)
    left, right, total = dilation_profile(sol, ts)
    records = (
        {"t": float(t), "left": float(a), "right": float(b), "total": float(c)}
        for t, a, b, c in zip(ts, left, right, total)
    )
    write_text(args.output, _lines(records))
    return EXIT_OK


HELP = {
    "solve": "solve and write a report (default)",
    "oracle": "brute-force grid search",
    "states": "dump realized states and retargeting points",
    "check": "solve and compare against the grid oracle",
    "profile": "left, right and total dilation over a grid",
}

HANDLERS = {
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "states": cmd_states,
    "check": cmd_check,
    "profile": cmd_profile,
}


# ----------------- entry points -----------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="Problem file (polygon and point)")
    common.add_argument("--format", choices=["json", "plain"], default="json", help="Input format")
    common.add_argument("--output", default=None, help="Report path (default: stdout)")
    common.add_argument("--svg", default=None, help="Render polygon, p, feed-link and witness")
    common.add_argument("--plot-svg", default=None, help="Render the distance plot with the lever at t*")
    common.add_argument("--grid-density", type=int, default=None, help="Oracle grid size (default 100n)")
    common.add_argument("--tolerance", type=float, default=1e-6, help="Relative tolerance of `check`")
    common.add_argument("--trace", default=None, help="Write one JSON line per sweep event")
    common.add_argument("--threads", type=int, default=1, help="Oracle grid workers")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    ap = argparse.ArgumentParser(
        prog="feedlink",
        description="Optimal feed-link placement: minimize the worst dilation through a link from p.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return ap


def _normalize_argv(argv: Sequence[str]) -> List[str]:
    argv = list(argv)
    if not argv or (argv[0] not in COMMANDS and argv[0] not in ("-h", "--help")):
        argv.insert(0, "solve")
    return argv


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else (logging.INFO if verbose == 1 else logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def run(argv: Sequence[str]) -> int:
    args = build_parser().parse_args(_normalize_argv(argv))
    _configure_logging(args.verbose)
    try:
        problem = load_problem(args.input, args.format)
        chain = build_chain(problem.polygon, problem.point)
        return HANDLERS[args.command](chain, args)
    except (InputFormatError, OSError, UnicodeDecodeError) as e:
        logger.error("cannot read input: %s", e)
        return EXIT_INPUT
    except GeometryError as e:
        logger.error("invalid geometry: %s", e)
        return EXIT_GEOMETRY
    except CheckFailed as e:
        logger.error("check failed: %s", e)
        return EXIT_CHECK
    except FeedLinkError as e:
        logger.error("solver failure: %s", e)
        return EXIT_INTERNAL
    except ValueError as e:
        logger.error("bad argument: %s", e)
        return EXIT_INPUT


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    raise SystemExit(main())
