# File: src/coloring/exact.py

import logging

import networkx as nx

from src.config import EXACT_MAX_VERTICES
from src.confgraph.dimacs import to_networkx
from src.confgraph.engine import ConflictGraph
from src.coloring.engine import dsatur
from src.errors import TooLargeError

logger = logging.getLogger(__name__)


def _masks(G: ConflictGraph) -> list:
    masks = []
    for v in range(G.vertex_count):
        m = 0
        for u in G.neighbors(v).tolist():
            m |= 1 << u
        masks.append(m)
    return masks


def _colorable(masks: list, k: int, clique: list) -> bool:
    n = len(masks)
    # class_masks[c] = vertices currently colored c
    class_masks = [0] * k
    colored = 0
    for c, v in enumerate(clique):
        class_masks[c] |= 1 << v
        colored |= 1 << v

    def pick(colored_now):
        best, best_key = -1, None
        for v in range(n):
            if colored_now >> v & 1:
                continue
            sat = sum(1 for cm in class_masks if cm & masks[v])
            key = (sat, bin(masks[v] & ~colored_now).count("1"))
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best

    def extend(colored_now, used):
        if colored_now == (1 << n) - 1:
            return True
        v = pick(colored_now)
        # a fresh color is tried only once: all unused colors are interchangeable
        for c in range(min(used + 1, k)):
            if class_masks[c] & masks[v]:
                continue
            class_masks[c] |= 1 << v
            if extend(colored_now | 1 << v, max(used, c + 1)):
                return True
            class_masks[c] &= ~(1 << v)
        return False

    return extend(colored, len(clique))


def exact_chromatic(G: ConflictGraph) -> int:
    """
    Exact chromatic number of a small graph.

    Lower bound from a maximum clique (networkx), upper bound from DSATUR,
    then backtracking over color classes for each k in between.

    Args:
        G (ConflictGraph): Graph with at most 64 vertices.

    Returns:
        int: The chromatic number.
    """
    n = G.vertex_count
    if n > EXACT_MAX_VERTICES:
        raise TooLargeError(f"exact chromatic number supports at most {EXACT_MAX_VERTICES} vertices, got {n}")
    if n == 0:
        return 0
    clique, size = nx.max_weight_clique(to_networkx(G), weight=None)
    upper = dsatur(G).k
    logger.debug("exact_chromatic: clique bound %d, DSATUR bound %d", size, upper)
    masks = _masks(G)
    for k in range(max(size, 1), upper):
        if _colorable(masks, k, sorted(clique)):
            return k
    return upper
