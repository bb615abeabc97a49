# File: src/cli/runner.py

import argparse
import logging
import sqlite3
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from src.config import DB_PATH, DEFAULT_MAX_ITERATIONS, DEFAULT_MEM_BUDGET, DEFAULT_RESTARTS, LOG_FORMAT
from src.confgraph.dimacs import export_dimacs
from src.confgraph.engine import MODES, ConflictGraph, build_graph
from src.confgraph.peeling import peel
from src.coloring.engine import SearchConfig, dsatur, save_coloring, verify
from src.coloring.solver import REPORTED_NEAR_MISSES, REPORTED_PART_COUNTS, solve, solve_many
from src.database import manager
from src.errors import FileFormatError, InvalidDimensionError, LeechToolError
from src.file_processor import process_file
from src.golay.engine import build_golay, check_report, dump_words
from src.hset.codec import encode_hset
from src.hset.selection import HSelection, make_hset, validate_hset
from src.laminated.sections import SECTION_COUNTS, laminated_spec, rank_of_span, reproduction_table, section, section_counts
from src.leech.engine import MinimalVectorSet, Shape, minimal_vectors
from src.leech.stats import (
    DISTANCE_TABLE,
    IP_HISTOGRAM,
    aggregated_histogram,
    check_histogram,
    histograms_for,
    sample_positions,
)
from src.utils.exporter import build_manifest, export_lines, export_manifest, export_to_pdf, export_vectors
from src.utils.helpers import spawn_seeds

logger = logging.getLogger(__name__)

# Salt separating the trajectory seeds of `color --trajectories` from restart seeds.
TRAJECTORY_SALT = 2 ** 32


@dataclass
class RunContext:
    """What a command read, wrote and seeded; feeds manifests and history."""

    argv: list
    seeds: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    manifests: list = field(default_factory=list)
    results: dict = field(default_factory=dict)


def _parse_rule(value: str) -> tuple:
    if value == "canonical":
        return "canonical", None
    if value.startswith("seed:"):
        try:
            return "seeded", int(value[5:])
        except ValueError:
            pass
    raise argparse.ArgumentTypeError("rule must be 'canonical' or 'seed:S'")


def _dimension(value: str) -> int:
    n = int(value)
    if not 1 <= n <= 24:
        raise argparse.ArgumentTypeError("dimension must be in 1..24")
    return n


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be in 0..2^64-1")
    return seed


def _load_input(path: str, kind, ctx: RunContext):
    """Loads a file through process_file and checks it gave a `kind`."""
    loaded = process_file(path)
    if not isinstance(loaded, kind):
        raise FileFormatError(f"{path}: not a usable input for this command")
    ctx.inputs.append(path)
    return loaded


def _load_target(args, ctx: RunContext):
    """The vector set a graph command works on: --hset FILE or M_n for --dim."""
    if getattr(args, "hset", None):
        return _load_input(args.hset, HSelection, ctx)
    if args.dim is None:
        raise ValueError("give --dim N or --hset FILE")
    return section(args.dim)


def _graph(args, ctx: RunContext):
    """(vector set, graph); a DIMACS --graph is its own vector set."""
    if getattr(args, "graph", None):
        G = _load_input(args.graph, ConflictGraph, ctx)
        return G, G
    X = _load_target(args, ctx)
    return X, build_graph(X, mode=args.mode, mem_budget=args.mem_budget)


def _format_histogram(histogram: dict) -> str:
    return "  ".join(f"{value:+d}:{count}" for value, count in sorted(histogram.items(), reverse=True))


# ---- golay / leech / laminated --------------------------------------------

def cmd_golay(args, ctx: RunContext) -> int:
    code = build_golay()
    lines = check_report(code)
    for line in lines:
        print(line)
    if args.dump:
        dump_words(code, args.dump)
        ctx.outputs.append(args.dump)
    return 0 if lines[-1].endswith("PASS") else 1


def cmd_enumerate(args, ctx: RunContext) -> int:
    S = section(args.dim)
    for shape, count in S.counts_by_shape.items():
        print(f"{shape.label:10s} {count}")
    print(f"{'total':10s} {len(S)}")
    if args.out:
        export_vectors(S.vectors, args.out)
        ctx.outputs.append(args.out)
    return 0


def cmd_stats(args, ctx: RunContext) -> int:
    S = section(args.dim)
    status = 0
    print(f"{S.label}: {len(S)} vectors")
    for shape, count in S.counts_by_shape.items():
        print(f"  {shape.label:10s} {count}")
    if args.sample > 0:
        if args.seed is None:
            raise ValueError("--sample needs an explicit --seed")
        ctx.seeds.append(args.seed)
        positions = sample_positions(S, args.sample, args.seed)
        histograms = histograms_for(S, positions, jobs=args.jobs)
        if args.dim == 24:
            failed = [int(p) for p, h in zip(positions, histograms) if not check_histogram(h)]
            print(f"histogram check on {len(histograms)} base vectors: {'PASS' if not failed else 'FAIL'}")
            if failed:
                print(f"  differing base vectors: {failed[:10]}")
                status = 1
        print(f"histogram around vector {int(positions[0])}: {_format_histogram(histograms[0])}")
    if args.full_pairs:
        total = aggregated_histogram(S, jobs=args.jobs)
        off = {v: c for v, c in total.items() if v != 32 or c != len(S)}
        print(f"all ordered pairs: {_format_histogram(total)}")
        min_ip = min(off) if off else 32
        print(f"diameter^2 = {DISTANCE_TABLE.get(min_ip, 2 * (32 - min_ip))}")
        if args.dim == 24:
            expected = {v: c * len(S) for v, c in IP_HISTOGRAM.items()}
            ok = total == expected
            print(f"full-pairs check: {'PASS' if ok else 'FAIL'}")
            status = status or (0 if ok else 1)
    return status


def cmd_slice(args, ctx: RunContext) -> int:
    spec = laminated_spec(args.dim)
    S = section(args.dim)
    counts = section_counts(S).as_row()
    expected = SECTION_COUNTS[args.dim]
    ok = counts == expected
    name = f"{spec.lattice_name} ≅ {spec.isomorphic_to}" if spec.isomorphic_to else spec.lattice_name
    print(f"n={spec.n} {name}: {counts} expected {expected} {'PASS' if ok else 'FAIL'}")
    for condition in spec.conditions:
        print(f"  {condition}")
    if args.out:
        export_vectors(S.vectors, args.out, dimension=args.dim)
        ctx.outputs.append(args.out)
    return 0 if ok else 1


def _counts_lines(rows: list) -> list:
    header = f"{'n':>3} {'lattice':10s} {'added':14s} {'#M_n':>7} {'(4,0)':>6} {'(2,0)':>6} {'(3,1)':>6} {'rank':>5}  result"
    lines = [header]
    for n, name, added, counts, expected, passed in rows:
        rank = rank_of_span(section(n))
        cells = " ".join(
            f"{value:>{width}d}" + ("" if value == want else "!")
            for value, want, width in zip(counts, expected, (7, 6, 6, 6)))
        verdict = "PASS" if passed and rank == n else "FAIL"
        lines.append(f"{n:>3} {name:10s} {added:14s} {cells} {rank:>5}  {verdict}")
    return lines


def cmd_counts(args, ctx: RunContext) -> int:
    rows = reproduction_table(minimal_vectors())
    if not args.all:
        if args.dim is None:
            raise ValueError("give --all or --dim N")
        rows = [row for row in rows if row[0] == args.dim]
    lines = _counts_lines(rows)
    for line in lines:
        print(line)
    failed = sum(1 for line in lines[1:] if line.endswith("FAIL"))
    if args.pdf:
        export_to_pdf("\n".join(lines), args.pdf, title="Laminated section counts")
        ctx.outputs.append(args.pdf)
    return 0 if failed == 0 else 1


# ---- graphs and colorings -------------------------------------------------

def cmd_export(args, ctx: RunContext) -> int:
    X, G = _graph(args, ctx)
    with open(args.out, "w", encoding="utf-8") as f:
        export_dimacs(G, f)
    print(f"{X.label}: {G.vertex_count} vertices, {G.edge_count} edges -> {args.out}")
    ctx.outputs.append(args.out)
    return 0


def cmd_peel(args, ctx: RunContext) -> int:
    X, G = _graph(args, ctx)
    balls, residual = peel(G, args.k)
    lines = [" ".join(str(int(v) + 1) for v in ball.members) for ball in balls]
    for i, ball in enumerate(balls, start=1):
        print(f"set {i}: {len(ball)} vertices")
    print(f"residual: {residual.vertex_count} vertices")
    export_lines(lines, args.out)
    ctx.outputs.append(args.out)
    return 0


def _dimension_of(args, X):
    dimension = getattr(X, "dimension", args.dim)
    return None if dimension is None else int(dimension)


def cmd_color(args, ctx: RunContext) -> int:
    X, G = _graph(args, ctx)
    dimension = _dimension_of(args, X)
    if args.strategy == "dsatur":
        coloring = dsatur(G)
    else:
        if args.seed is None:
            raise LeechToolError("tabucol needs an explicit --seed")
        cfg = SearchConfig(k=args.k or 1, seed=args.seed, max_iterations=args.max_iters,
                           restarts=args.restarts, peel_count=args.peel, time_limit=args.time_limit)
        if args.time_limit is not None:
            logger.warning("--time-limit makes the result depend on machine speed")
        if args.trajectories > 1:
            seeds = spawn_seeds(args.seed, args.trajectories, salt=TRAJECTORY_SALT)
            coloring = solve_many(G, cfg, seeds, jobs=args.jobs, initial_k=args.k)
        else:
            coloring = solve(G, cfg, initial_k=args.k, descend=not args.no_descend)
    if args.seed is not None:
        ctx.seeds.append(args.seed)
    save_coloring(coloring, dimension, args.out)
    ctx.outputs.append(args.out)
    on_section = isinstance(X, MinimalVectorSet)
    reported = REPORTED_PART_COUNTS.get(dimension) if on_section else None
    print(f"{X.label}: {coloring.k} colors, {coloring.conflicts} conflicts"
          + (f" (best reported: {reported})" if reported else ""))
    near_miss = coloring.meta.get("near_miss")
    if near_miss:
        ctx.results["near_miss"] = near_miss
        print(f"near miss: k={near_miss['k']} with {near_miss['conflicts']} conflicts")
    known = REPORTED_NEAR_MISSES.get(dimension) if on_section else None
    if known:
        print(f"reported near miss: k={known[0]} with {known[1]} conflicts")
    return 0 if coloring.proper else 1


def cmd_verify(args, ctx: RunContext) -> int:
    X, G = _graph(args, ctx)
    coloring, dimension = _load_input(args.coloring, tuple, ctx)
    if dimension != _dimension_of(args, X):
        logger.warning("coloring file is for dimension %s, checking against %s", dimension, X.label)
    report = verify(G, coloring)
    if report.conflicts != coloring.conflicts:
        logger.warning("file records %d conflicts, recount gives %d", coloring.conflicts, report.conflicts)
    print(f"{X.label}: {coloring.colors_used} colors used, {report.conflicts} conflicts")
    for u, v in report.edges:
        print(f"  conflict {u} {v} color {int(coloring.assignment[u])}")
    return 0 if report.proper else 1


# ---- H-sets ---------------------------------------------------------------

def cmd_hset_make(args, ctx: RunContext) -> int:
    rule, seed = args.rule
    h = make_hset(section(args.dim), rule=rule, seed=seed)
    if seed is not None:
        ctx.seeds.append(seed)
    if args.out.lower().endswith(".dat"):
        if args.dim != 24:
            raise InvalidDimensionError("DAT files hold H-selections over M_24 only")
        with open(args.out, "wb") as f:
            f.write(encode_hset(h))
    else:
        export_vectors(h.vectors, args.out, dimension=args.dim)
    ctx.outputs.append(args.out)
    print(f"{h.label}: {len(h)} vectors -> {args.out}")
    return 0


def cmd_hset_decode(args, ctx: RunContext) -> int:
    if not args.input.lower().endswith(".dat"):
        raise FileFormatError(f"{args.input}: expected a .dat file")
    h = _load_input(args.input, HSelection, ctx)
    counts = np.bincount(h.shapes, minlength=len(Shape))
    for shape in Shape:
        print(f"{shape.label:10s} {int(counts[shape])}")
    export_vectors(h.vectors, args.out, dimension=24)
    ctx.outputs.append(args.out)
    return 0


def cmd_hset_encode(args, ctx: RunContext) -> int:
    h = _load_input(args.input, HSelection, ctx)
    with open(args.out, "wb") as f:
        f.write(encode_hset(h))
    ctx.outputs.append(args.out)
    print(f"{h.label}: {len(h)} records -> {args.out}")
    return 0


def cmd_hset_validate(args, ctx: RunContext) -> int:
    h = _load_input(args.input, HSelection, ctx)
    report = validate_hset(h, scan_pairs=not args.no_pairs)
    print(f"{h.label}: {report.size} vectors (expected {report.expected_size})")
    print(f"pair-complete: {report.pair_complete}")
    for shape, count in report.shape_counts.items():
        print(f"  {shape.label:10s} {count}")
    if report.ip_support:
        print(f"inner products: {sorted(report.ip_support)}")
        print(f"diameter^2 = {report.diameter_squared}")
    for failure in report.failures:
        print(f"FAIL {failure}")
    return 0 if report.valid else 1


def cmd_history(args, ctx: RunContext) -> int:
    manager.setup_database(args.db)
    for record_id, timestamp, command, status, wall_time, _ in manager.get_all_records(args.limit, db_path=args.db):
        seconds = "-" if wall_time is None else f"{wall_time:.2f}s"
        print(f"{record_id:>5} {timestamp} {status:8s} {seconds:>9} {command}")
    return 0


# ---- parser ---------------------------------------------------------------

def _add_target(p, required_dim: bool = False, graph_file: bool = False):
    p.add_argument("--dim", type=_dimension, required=required_dim, help="Dimension n of M_n (1..24)")
    if not required_dim:
        p.add_argument("--hset", help="H-selection file (.dat or vector text) instead of M_n")
    if graph_file:
        p.add_argument("--graph", help="DIMACS graph file (.col, .dimacs) instead of a vector set")
    p.add_argument("--mode", choices=MODES, default="auto", help="Conflict graph representation")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    common.add_argument("--db", default=DB_PATH, help="Run-history database")
    common.add_argument("--no-history", action="store_true", help="Do not record this run")
    common.add_argument("--mem-budget", type=int, default=DEFAULT_MEM_BUDGET,
                        help="Byte budget for explicit conflict graphs")
    common.add_argument("--jobs", type=int, default=1, help="Worker threads")

    parser = argparse.ArgumentParser(prog="leechcolor",
                                     description="Leech lattice minimal vectors, sections and partition search")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("golay", parents=[common], help="Build and check the Golay code")
    p.add_argument("--check", action="store_true", help="Print the weight histogram check (default)")
    p.add_argument("--dump", help="Write the 4096 codewords")
    p.set_defaults(handler=cmd_golay)

    p = sub.add_parser("enumerate", parents=[common], help="Enumerate minimal vectors")
    p.add_argument("--dim", type=_dimension, default=24)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("stats", parents=[common], help="Inner-product statistics")
    p.add_argument("--dim", type=_dimension, default=24)
    p.add_argument("--sample", type=int, default=100, help="Random base vectors to check")
    p.add_argument("--seed", type=_seed, help="Required when --sample is above 0")
    p.add_argument("--full-pairs", action="store_true", help="Scan all ordered pairs")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("slice", parents=[common], help="Laminated section M_n")
    p.add_argument("--dim", type=_dimension, required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_slice)

    p = sub.add_parser("counts", parents=[common], help="Section count table")
    p.add_argument("--all", action="store_true")
    p.add_argument("--dim", type=_dimension)
    p.add_argument("--pdf", help="Also export the table as PDF")
    p.set_defaults(handler=cmd_counts)

    p = sub.add_parser("export", parents=[common], help="Export a conflict graph")
    _add_target(p)
    p.add_argument("--format", choices=("dimacs",), default="dimacs")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_export)

    p = sub.add_parser("peel", parents=[common], help="Peel independent balls")
    _add_target(p)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_peel)

    p = sub.add_parser("color", parents=[common], help="Search for a proper coloring")
    _add_target(p, graph_file=True)
    p.add_argument("-k", type=int, help="First number of colors to try")
    p.add_argument("--seed", type=_seed)
    p.add_argument("--strategy", choices=("tabucol", "dsatur"), default="tabucol")
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERATIONS)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--peel", type=int, default=0)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--trajectories", type=int, default=1, help="Independent searches, best kept")
    p.add_argument("--no-descend", action="store_true", help="Stop at k instead of trying fewer colors")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_color)

    p = sub.add_parser("verify", parents=[common], help="Recount conflicts of a coloring file")
    _add_target(p, graph_file=True)
    p.add_argument("--coloring", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("hset", help="H-selections and the DAT format")
    hsub = p.add_subparsers(dest="hset_command", required=True)
    q = hsub.add_parser("make", parents=[common])
    q.add_argument("--dim", type=_dimension, required=True)
    q.add_argument("--rule", type=_parse_rule, default=("canonical", None))
    q.add_argument("--out", required=True)
    q.set_defaults(handler=cmd_hset_make)
    q = hsub.add_parser("decode", parents=[common])
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(handler=cmd_hset_decode)
    q = hsub.add_parser("encode", parents=[common])
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(handler=cmd_hset_encode)
    q = hsub.add_parser("validate", parents=[common])
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--no-pairs", action="store_true", help="Skip the pairwise inner-product scan")
    q.set_defaults(handler=cmd_hset_validate)

    p = sub.add_parser("history", parents=[common], help="List past runs")
    p.add_argument("--limit", type=int, default=20)
    p.set_defaults(handler=cmd_history)
    return parser


def _configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _open_history(args, argv) -> int:
    if args.no_history or args.handler is cmd_history:
        return None
    try:
        manager.setup_database(args.db)
        return manager.add_record(" ".join(argv), db_path=args.db)
    except sqlite3.Error as e:
        logger.warning("run history unavailable: %s", e)
        return None


def _close_history(args, record_id, status: int, wall_time: float, ctx: RunContext):
    if record_id is None:
        return
    manifest = ctx.manifests[0] if len(ctx.manifests) == 1 else {"manifests": ctx.manifests} if ctx.manifests else None
    try:
        manager.update_record_result(record_id, "ok" if status == 0 else f"exit-{status}", wall_time,
                                     manifest, db_path=args.db)
    except sqlite3.Error as e:
        logger.warning("could not update run history: %s", e)


def run(argv) -> int:
    """
    Parses argv, runs the subcommand and writes manifests for its outputs.

    Returns:
        int: 0 on success, 1 on a failed check or error, 2 on usage errors.
    """
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    _configure_logging(args)

    ctx = RunContext(argv=argv)
    started = time.monotonic()
    record_id = _open_history(args, argv)
    try:
        status = args.handler(args, ctx)
        for output in ctx.outputs:
            manifest = build_manifest(argv, ctx.seeds, ctx.inputs, [output], results=ctx.results)
            export_manifest(manifest, output)
            ctx.manifests.append(manifest)
    except LeechToolError as e:
        logger.error("error[%s]: %s", e.code, e)
        status = 1
    except OSError as e:
        logger.error("error[io]: %s", e)
        status = 1
    except ValueError as e:
        logger.error("error[usage]: %s", e)
        status = 2
    _close_history(args, record_id, status, time.monotonic() - started, ctx)
    return status
