# File: src/coloring/engine.py

import heapq
import json
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from src.config import (
    DEFAULT_MAX_ITERATIONS,
    DEADLINE_CHECK_EVERY,
    DEFAULT_RESTARTS,
    RNG_ALGORITHM,
    TABU_LOG_EVERY,
    TABU_TENURE_BASE,
    TABU_TENURE_JITTER,
    TABU_TENURE_SLOPE,
)
from src.confgraph.engine import ADJACENCY_THRESHOLD, ConflictGraph
from src.errors import FileFormatError, LengthMismatchError, SearchInvariantError
from src.utils.helpers import iter_ip_blocks, make_rng

logger = logging.getLogger(__name__)

MAX_REPORTED_EDGES = 100
COLORING_FIELDS = ("dimension", "colors", "seed", "strategy", "iterations", "conflicts", "assignment")

_BLOCKED = np.iinfo(np.int64).max // 4


@dataclass
class SearchConfig:
    k: int
    seed: int
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tabu_tenure_base: int = TABU_TENURE_BASE
    tabu_tenure_slope: float = TABU_TENURE_SLOPE
    restarts: int = DEFAULT_RESTARTS
    peel_count: int = 0
    time_limit: float = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass
class Coloring:
    """Color per vertex with its conflict count and search metadata."""

    assignment: np.ndarray
    k: int
    conflicts: int
    meta: dict = field(default_factory=dict)

    @property
    def proper(self) -> bool:
        return self.conflicts == 0

    @property
    def colors_used(self) -> int:
        return int(np.unique(self.assignment).size)


@dataclass
class VerifyReport:
    conflicts: int
    edges: list

    @property
    def proper(self) -> bool:
        return self.conflicts == 0


def _check_length(G: ConflictGraph, assignment: np.ndarray):
    if assignment.size != G.vertex_count:
        raise LengthMismatchError(f"assignment has {assignment.size} entries, graph has {G.vertex_count} vertices")


def verify(G: ConflictGraph, c) -> VerifyReport:
    """
    Recounts monochromatic edges from scratch.

    Args:
        G (ConflictGraph): The graph.
        c: A Coloring or a plain assignment array.

    Returns:
        VerifyReport: Conflict count and the first (at most 100) conflicting edges
        as 0-based (u, v) with u < v in ascending order.
    """
    a = np.asarray(c.assignment if isinstance(c, Coloring) else c, dtype=np.int64)
    _check_length(G, a)
    if G.mode == "explicit":
        src = np.repeat(np.arange(G.vertex_count), np.diff(G.indptr))
        dst = G.indices
        mono = (src < dst) & (a[src] == a[dst])
        us, vs = src[mono], dst[mono]
        edges = list(zip(us[:MAX_REPORTED_EDGES].tolist(), vs[:MAX_REPORTED_EDGES].tolist()))
        return VerifyReport(conflicts=int(mono.sum()), edges=edges)

    total = 0
    edges = []
    for color in np.unique(a):
        members = np.flatnonzero(a == color)
        for start, block in iter_ip_blocks(G.vectors[members]):
            rows, cols = np.nonzero(block <= ADJACENCY_THRESHOLD)
            rows = rows + start
            keep = rows < cols
            total += int(keep.sum())
            # pairs are sorted within a block, so its first 100 suffice
            pairs = zip(members[rows[keep]][:MAX_REPORTED_EDGES].tolist(),
                        members[cols[keep]][:MAX_REPORTED_EDGES].tolist())
            edges.extend(pairs)
    edges.sort()
    return VerifyReport(conflicts=total, edges=edges[:MAX_REPORTED_EDGES])


def dsatur(G: ConflictGraph, deadline: float = None) -> Coloring:
    """
    DSATUR construction: repeatedly colors the uncolored vertex with the most
    distinct neighbor colors with the smallest free color.

    Saturation ties are broken by higher degree, then by lowest vertex id.
    On a regular graph this is plain lowest-id order.

    Args:
        G (ConflictGraph): The graph.
        deadline (float): Optional time.monotonic() deadline. The construction
            always completes; passing the deadline is only logged.
    """
    started = time.monotonic()
    n = G.vertex_count
    degrees = G.degrees()
    colors = np.full(n, -1, dtype=np.int64)
    seen = [set() for _ in range(n)]
    saturation = np.zeros(n, dtype=np.int64)
    heap = [(0, -int(degrees[v]), v) for v in range(n)]
    heapq.heapify(heap)
    colored = 0
    while heap:
        neg_sat, neg_deg, v = heapq.heappop(heap)
        if colors[v] >= 0 or -neg_sat != saturation[v]:
            continue
        colored += 1
        if deadline is not None and colored % DEADLINE_CHECK_EVERY == 0 and time.monotonic() > deadline:
            logger.warning("time limit passed during DSATUR at vertex %d of %d; finishing the construction", colored, n)
            deadline = None
        used = seen[v]
        c = 0
        while c in used:
            c += 1
        colors[v] = c
        nbrs = G.neighbors(v)
        for u in nbrs[colors[nbrs] < 0].tolist():
            if c not in seen[u]:
                seen[u].add(c)
                saturation[u] += 1
                heapq.heappush(heap, (-int(saturation[u]), -int(degrees[u]), u))
    k = int(colors.max()) + 1 if n else 0
    meta = {"strategy": "dsatur", "seed": None, "iterations": n,
            "wall_time": time.monotonic() - started}
    coloring = Coloring(assignment=colors, k=k, conflicts=0, meta=meta)
    report = verify(G, coloring)
    if report.conflicts:
        raise SearchInvariantError(f"DSATUR produced {report.conflicts} conflicts")
    return coloring


def tabucol(G: ConflictGraph, cfg: SearchConfig, initial: np.ndarray = None) -> Coloring:
    """
    TABUCOL local search for a k-coloring with as few conflicts as possible.

    A move recolors one conflicting vertex. After moving v away from color c,
    (v, c) stays tabu for base + slope * (#conflicting vertices) + U{0..9}
    iterations; a tabu move is allowed when it beats the best conflict count.

    Args:
        G (ConflictGraph): The graph.
        cfg (SearchConfig): k, seed, budget and tenure parameters.
        initial (np.ndarray): Optional start; entries outside 0..k-1 are drawn at random.

    Returns:
        Coloring: The best assignment seen.
    """
    started = time.monotonic()
    rng = make_rng(cfg.seed)
    n, k = G.vertex_count, cfg.k
    if initial is None:
        a = rng.integers(0, k, size=n).astype(np.int64)
    else:
        a = np.asarray(initial, dtype=np.int64).copy()
        _check_length(G, a)
        bad = (a < 0) | (a >= k)
        a[bad] = rng.integers(0, k, size=int(bad.sum()))

    gamma = G.color_counts(a, k).astype(np.int64)
    idx = np.arange(n)
    f = int(gamma[idx, a].sum()) // 2
    best_f, best_a = f, a.copy()
    tabu = np.zeros((n, k), dtype=np.int64)
    it = 0
    deadline = None if cfg.time_limit is None else started + cfg.time_limit

    while it < cfg.max_iterations and best_f > 0 and k > 1:
        own = gamma[idx, a]
        conf = np.flatnonzero(own > 0)
        delta = gamma[conf] - own[conf][:, None]
        delta[np.arange(conf.size), a[conf]] = _BLOCKED
        allowed = (tabu[conf] <= it) | (f + delta < best_f)
        masked = np.where(allowed, delta, _BLOCKED)
        lowest = masked.min()
        if lowest >= _BLOCKED:
            row = int(rng.integers(conf.size))
            v = int(conf[row])
            new = int((a[v] + 1 + rng.integers(k - 1)) % k)
            move_delta = int(delta[row, new])
        else:
            rows, cols = np.nonzero(masked == lowest)
            pick = int(rng.integers(rows.size))
            v, new, move_delta = int(conf[rows[pick]]), int(cols[pick]), int(lowest)

        old = int(a[v])
        nbrs = G.neighbors(v)
        gamma[nbrs, old] -= 1
        gamma[nbrs, new] += 1
        a[v] = new
        f += move_delta
        tenure = int(cfg.tabu_tenure_base + cfg.tabu_tenure_slope * conf.size) + int(rng.integers(0, TABU_TENURE_JITTER))
        tabu[v, old] = it + tenure
        it += 1

        if f < best_f:
            best_f, best_a = f, a.copy()
        if it % TABU_LOG_EVERY == 0:
            logger.debug("tabucol k=%d it=%d conflicts=%d best=%d", k, it, f, best_f)
        if deadline is not None and it % DEADLINE_CHECK_EVERY == 0 and time.monotonic() > deadline:
            logger.warning("tabucol stopped by time limit at iteration %d; run is not replayable", it)
            break

    if k == 1:
        best_a = np.zeros(n, dtype=np.int64)
        best_f = G.edge_count
    current = verify(G, a).conflicts if k > 1 else best_f
    recount = verify(G, best_a).conflicts
    if current != f and k > 1 or recount != best_f:
        raise SearchInvariantError(f"incremental conflicts {f}/{best_f} disagree with recount {current}/{recount}")

    meta = {"strategy": "tabucol", "seed": cfg.seed, "iterations": it, "rng": RNG_ALGORITHM,
            "wall_time": time.monotonic() - started}
    logger.info("tabucol k=%d seed=%d: %d conflicts after %d iterations", k, cfg.seed, best_f, it)
    return Coloring(assignment=best_a, k=k, conflicts=best_f, meta=meta)


def compact(c: Coloring) -> Coloring:
    """Renumbers colors to 0..used-1 in order of first appearance."""
    _, first, inverse = np.unique(c.assignment, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    assignment = order[inverse].astype(np.int64)
    return Coloring(assignment=assignment, k=int(first.size), conflicts=c.conflicts, meta=dict(c.meta))


def coloring_document(c: Coloring, dimension) -> dict:
    return {
        "dimension": dimension,
        "colors": int(c.k),
        "seed": c.meta.get("seed"),
        "strategy": c.meta.get("strategy"),
        "iterations": int(c.meta.get("iterations", 0)),
        "conflicts": int(c.conflicts),
        "assignment": [int(x) for x in c.assignment],
    }


def save_coloring(c: Coloring, dimension, file_path: str):
    """Writes the coloring file; same coloring, same bytes."""
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(coloring_document(c, dimension), f)
        f.write("\n")


def load_coloring(file_path: str) -> tuple:
    """
    Reads a coloring file.

    Returns:
        tuple: (Coloring, dimension).
    """
    with open(file_path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FileFormatError(f"{file_path}: not a coloring file ({e})") from None
    missing = [name for name in COLORING_FIELDS if name not in doc]
    if missing:
        raise FileFormatError(f"{file_path}: missing fields {missing}")
    assignment = np.asarray(doc["assignment"], dtype=np.int64)
    meta = {"seed": doc["seed"], "strategy": doc["strategy"], "iterations": doc["iterations"]}
    return Coloring(assignment=assignment, k=int(doc["colors"]), conflicts=int(doc["conflicts"]), meta=meta), doc["dimension"]
