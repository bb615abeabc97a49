# File: src/confgraph/engine.py

import logging

import numpy as np

from src.config import DEFAULT_MEM_BUDGET, IP_BLOCK_ROWS
from src.errors import CapacityExceededError, GraphConstructionError, LengthMismatchError
from src.utils.helpers import as_float, iter_ip_blocks

logger = logging.getLogger(__name__)

# Vertices are adjacent iff their inner product is at most this (distance^2 >= 96).
ADJACENCY_THRESHOLD = -16
ADJACENT_VALUES = (-16, -32)

MODES = ("explicit", "implicit", "auto")


class ConflictGraph:
    """
    Conflict graph over a vector list, either with materialized CSR neighbor
    lists (explicit) or answering adjacency from inner products (implicit).

    Vertex v is row v of `vectors`; `vertex_ids[v]` is its position in the
    source set's canonical order.
    """

    def __init__(self, vertex_count: int, mode: str, vectors: np.ndarray = None,
                 vertex_ids: np.ndarray = None, indptr: np.ndarray = None,
                 indices: np.ndarray = None, label: str = ""):
        if mode == "implicit" and vectors is None:
            raise GraphConstructionError("implicit mode needs the source vectors")
        self.vertex_count = int(vertex_count)
        self.mode = mode
        self.vectors = vectors
        self.vertex_ids = np.arange(vertex_count, dtype=np.int64) if vertex_ids is None else vertex_ids
        self.indptr = indptr
        self.indices = indices
        self.label = label
        self._vf = None if vectors is None else as_float(vectors)
        self._edge_count = None if mode == "implicit" else int(indices.size // 2)

    def __len__(self) -> int:
        return self.vertex_count

    def __repr__(self) -> str:
        return f"ConflictGraph({self.label or 'graph'}, V={self.vertex_count}, mode={self.mode})"

    @property
    def edge_count(self) -> int:
        if self._edge_count is None:
            self._edge_count = int(self.degrees().sum() // 2)
        return self._edge_count

    def neighbors(self, v: int) -> np.ndarray:
        if self.mode == "explicit":
            return self.indices[self.indptr[v]:self.indptr[v + 1]]
        ips = self._vf @ self._vf[v]
        return np.flatnonzero(ips <= ADJACENCY_THRESHOLD)

    def degree(self, v: int) -> int:
        if self.mode == "explicit":
            return int(self.indptr[v + 1] - self.indptr[v])
        return int(self.neighbors(v).size)

    def degrees(self, positions=None) -> np.ndarray:
        if self.mode == "explicit":
            deg = np.diff(self.indptr)
            return deg if positions is None else deg[np.asarray(positions)]
        rows = self.vectors if positions is None else self.vectors[np.asarray(positions)]
        out = []
        for _, block in iter_ip_blocks(rows, self.vectors):
            out.append((block <= ADJACENCY_THRESHOLD).sum(axis=1))
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if self.mode == "explicit":
            nbrs = self.neighbors(u)
            pos = np.searchsorted(nbrs, v)
            return bool(pos < nbrs.size and nbrs[pos] == v)
        return bool(np.dot(self._vf[u], self._vf[v]) <= ADJACENCY_THRESHOLD)

    def adjacency_rows(self, start: int, stop: int) -> np.ndarray:
        """Dense boolean adjacency rows start..stop-1."""
        if self.mode == "explicit":
            out = np.zeros((stop - start, self.vertex_count), dtype=bool)
            for r, v in enumerate(range(start, stop)):
                out[r, self.neighbors(v)] = True
            return out
        return (self._vf[start:stop] @ self._vf.T) <= ADJACENCY_THRESHOLD

    def iter_edge_blocks(self, block_rows: int = IP_BLOCK_ROWS):
        """Yields (us, vs) arrays of edges with u < v, ordered by u then v."""
        if self.mode == "explicit":
            for start in range(0, self.vertex_count, block_rows):
                stop = min(start + block_rows, self.vertex_count)
                lo, hi = self.indptr[start], self.indptr[stop]
                us = np.repeat(np.arange(start, stop), np.diff(self.indptr[start:stop + 1]))
                vs = self.indices[lo:hi]
                keep = us < vs
                yield us[keep], vs[keep]
            return
        for start, block in iter_ip_blocks(self.vectors, block_rows=block_rows):
            us, vs = np.nonzero(block <= ADJACENCY_THRESHOLD)
            us = us + start
            keep = us < vs
            yield us[keep], vs[keep]

    def edges(self):
        """Streams edges (u, v), u < v, in ascending order."""
        for us, vs in self.iter_edge_blocks():
            yield from zip(us.tolist(), vs.tolist())

    def color_counts(self, assignment: np.ndarray, k: int) -> np.ndarray:
        """
        Table t with t[v, c] = number of neighbors of v colored c.

        Args:
            assignment (np.ndarray): Color per vertex, in 0..k-1.
            k (int): Number of colors.

        Returns:
            np.ndarray: (V, k) int32 table.
        """
        assignment = np.asarray(assignment, dtype=np.int64)
        if assignment.size != self.vertex_count:
            raise LengthMismatchError(f"assignment has {assignment.size} entries, graph has {self.vertex_count} vertices")
        table = np.zeros((self.vertex_count, k), dtype=np.int32)
        if self.mode == "explicit":
            src = np.repeat(np.arange(self.vertex_count), np.diff(self.indptr))
            np.add.at(table, (src, assignment[self.indices]), 1)
            return table
        onehot = np.zeros((self.vertex_count, k), dtype=np.float32)
        onehot[np.arange(self.vertex_count), assignment] = 1.0
        for start, block in iter_ip_blocks(self.vectors):
            adj = (block <= ADJACENCY_THRESHOLD).astype(np.float32)
            table[start:start + block.shape[0]] = np.rint(adj @ onehot).astype(np.int32)
        return table

    def induced(self, positions) -> "ConflictGraph":
        """Subgraph on the given vertices, renumbered in the given order."""
        positions = np.asarray(positions, dtype=np.int64)
        vectors = None if self.vectors is None else self.vectors[positions]
        ids = self.vertex_ids[positions]
        if self.mode == "implicit":
            return ConflictGraph(positions.size, "implicit", vectors=vectors, vertex_ids=ids, label=self.label)
        remap = np.full(self.vertex_count, -1, dtype=np.int64)
        remap[positions] = np.arange(positions.size)
        indptr = [0]
        chunks = []
        for v in positions:
            nbrs = remap[self.neighbors(v)]
            nbrs = np.sort(nbrs[nbrs >= 0]).astype(np.int32)
            chunks.append(nbrs)
            indptr.append(indptr[-1] + nbrs.size)
        indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int32)
        return ConflictGraph(positions.size, "explicit", vectors=vectors, vertex_ids=ids,
                             indptr=np.asarray(indptr, dtype=np.int64), indices=indices, label=self.label)


def estimate_explicit_bytes(vectors: np.ndarray, sample: int = 256) -> int:
    """CSR size estimated from the degrees of evenly spaced vertices."""
    n = vectors.shape[0]
    picks = np.unique(np.linspace(0, n - 1, num=min(sample, n)).astype(np.int64))
    ips = as_float(vectors[picks]) @ as_float(vectors).T
    mean_degree = float((ips <= ADJACENCY_THRESHOLD).sum(axis=1).mean())
    return int(4 * mean_degree * n + 8 * (n + 1))


def _build_explicit(vectors: np.ndarray, mem_budget: int, label: str) -> ConflictGraph:
    n = vectors.shape[0]
    chunks = []
    degrees = []
    stored = 0
    for start, block in iter_ip_blocks(vectors):
        adj = block <= ADJACENCY_THRESHOLD
        unexpected = adj & (block != ADJACENT_VALUES[0]) & (block != ADJACENT_VALUES[1])
        if unexpected.any():
            r, c = np.argwhere(unexpected)[0]
            raise GraphConstructionError(
                f"inner product {block[r, c]} between vertices {start + r} and {c} is not one of {ADJACENT_VALUES}")
        rows, cols = np.nonzero(adj)
        chunks.append(cols.astype(np.int32))
        degrees.append(np.bincount(rows, minlength=block.shape[0]))
        stored += cols.size
        if 4 * stored + 8 * (n + 1) > mem_budget:
            raise CapacityExceededError(
                f"explicit graph for {label or 'vector set'} exceeds the memory budget of {mem_budget} bytes; "
                "use implicit mode")
    indptr = np.zeros(n + 1, dtype=np.int64)
    if degrees:
        np.cumsum(np.concatenate(degrees), out=indptr[1:])
    indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int32)
    return ConflictGraph(n, "explicit", vectors=vectors, indptr=indptr, indices=indices, label=label)


def build_graph(X, mode: str = "explicit", mem_budget: int = DEFAULT_MEM_BUDGET) -> ConflictGraph:
    """
    Builds the conflict graph of a vector set: adjacency iff ip <= -16.

    Args:
        X: A MinimalVectorSet or HSelection (anything with `vectors` and `label`).
        mode (str): 'explicit', 'implicit' or 'auto' (explicit when it fits the budget).
        mem_budget (int): Byte budget for explicit neighbor lists.

    Returns:
        ConflictGraph: The graph; vertex v is row v of X.vectors.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    vectors = np.asarray(X.vectors, dtype=np.int8)
    label = getattr(X, "label", "")
    if vectors.shape[0] < 1:
        raise GraphConstructionError("cannot build a conflict graph on an empty set")
    if mode == "auto":
        estimate = estimate_explicit_bytes(vectors)
        mode = "explicit" if estimate <= mem_budget else "implicit"
        logger.info("Graph %s: estimated explicit size %.1f MiB -> %s mode", label, estimate / 2 ** 20, mode)
    if mode == "implicit":
        return ConflictGraph(vectors.shape[0], "implicit", vectors=vectors, label=label)
    graph = _build_explicit(vectors, mem_budget, label)
    logger.info("Built explicit graph %s: %d vertices, %d edges", label, graph.vertex_count, graph.edge_count)
    return graph
