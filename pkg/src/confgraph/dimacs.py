# File: src/confgraph/dimacs.py

import logging

import networkx as nx
import numpy as np

from src.confgraph.engine import ConflictGraph
from src.errors import FileFormatError

logger = logging.getLogger(__name__)


def export_dimacs(G: ConflictGraph, sink):
    """
    Writes G in DIMACS edge format: `p edge V E`, then `e u v` per edge with
    1-based ids, u < v, sorted.

    Args:
        G (ConflictGraph): Explicit or implicit graph.
        sink: A writable text stream.
    """
    sink.write(f"p edge {G.vertex_count} {G.edge_count}\n")
    written = 0
    for us, vs in G.iter_edge_blocks():
        if us.size:
            sink.write("".join(f"e {u} {v}\n" for u, v in zip((us + 1).tolist(), (vs + 1).tolist())))
            written += us.size
    if written != G.edge_count:
        raise FileFormatError(f"wrote {written} edges, header says {G.edge_count}")


def read_dimacs(source, label: str = "") -> ConflictGraph:
    """
    Parses a DIMACS edge file into an explicit graph without source vectors.

    Args:
        source: A readable text stream.
        label (str): Name for logs.

    Returns:
        ConflictGraph: Explicit graph with 0-based vertices.
    """
    n = None
    declared = None
    us, vs = [], []
    for line_no, line in enumerate(source, start=1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise FileFormatError(f"line {line_no}: malformed problem line")
            n, declared = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise FileFormatError(f"line {line_no}: edge before problem line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise FileFormatError(f"line {line_no}: bad edge {parts[1]} {parts[2]}")
            us.append(u)
            vs.append(v)
    if n is None:
        raise FileFormatError("missing problem line")
    if us:
        pairs = np.unique(np.sort(np.array([us, vs], dtype=np.int64).T, axis=1), axis=0)
    else:
        pairs = np.zeros((0, 2), dtype=np.int64)
    if pairs.shape[0] != declared:
        logger.warning("DIMACS header declares %d edges, found %d distinct", declared, pairs.shape[0])
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return ConflictGraph(n, "explicit", indptr=indptr, indices=dst.astype(np.int32), label=label)


def to_networkx(G: ConflictGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(G.vertex_count))
    for us, vs in G.iter_edge_blocks():
        graph.add_edges_from(zip(us.tolist(), vs.tolist()))
    return graph
