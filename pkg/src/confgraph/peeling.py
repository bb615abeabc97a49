# File: src/confgraph/peeling.py

import logging
from dataclasses import dataclass

import numpy as np

from src.config import PEEL_CANDIDATE_LIMIT
from src.confgraph.engine import ConflictGraph
from src.errors import BadPairError, GraphConstructionError
from src.leech.engine import ip
from src.utils.helpers import as_float

logger = logging.getLogger(__name__)

BALL_PAIR_IP = -8
BALL_THRESHOLD = 16
CENTER_NORM = 48


@dataclass
class IndependentBall:
    """Vertices z with <center, z> >= 16, center = x + y for a pair at ip -8."""

    center: np.ndarray
    members: np.ndarray
    pair: tuple = None

    def __len__(self) -> int:
        return int(self.members.size)


def independent_ball(X, x: int, y: int) -> IndependentBall:
    """
    The ball around x + y for two vertices of X with inner product -8.

    Args:
        X: A vector set (MinimalVectorSet, HSelection) with `vectors`.
        x (int): Position of the first vector.
        y (int): Position of the second vector.

    Returns:
        IndependentBall: Members are positions into X, ascending.
    """
    vx, vy = X.vectors[x], X.vectors[y]
    value = ip(vx, vy)
    if value != BALL_PAIR_IP:
        raise BadPairError(f"ip of vertices {x} and {y} is {value}, expected {BALL_PAIR_IP}")
    center = vx.astype(np.int32) + vy.astype(np.int32)
    if ip(center, center) != CENTER_NORM:
        raise BadPairError(f"center of {x} and {y} has squared norm {ip(center, center)}")
    scores = as_float(X.vectors) @ center.astype(np.float32)
    return IndependentBall(center=center, members=np.flatnonzero(scores >= BALL_THRESHOLD), pair=(x, y))


def ball_pairs(X, bases=None, ordered: bool = True):
    """
    Lazily yields pairs (u, v) with <x_u, x_v> = -8 in canonical order.

    With the default bases every pair is yielded once (u < v); with explicit
    bases every partner of each base is yielded.
    """
    vf = as_float(X.vectors)
    all_bases = bases is None
    bases = range(vf.shape[0]) if all_bases else bases
    for u in bases:
        partners = np.flatnonzero(np.rint(vf @ vf[u]) == BALL_PAIR_IP)
        if all_bases and ordered:
            partners = partners[partners > u]
        for v in partners:
            yield int(u), int(v)


def _candidate_centers(G: ConflictGraph, uncovered: np.ndarray, limit: int):
    seen = set()
    centers = []
    pairs = []
    for u, v in ball_pairs(G, bases=np.flatnonzero(uncovered)):
        center = G.vectors[u].astype(np.int32) + G.vectors[v].astype(np.int32)
        key = center.tobytes()
        if key in seen:
            continue
        seen.add(key)
        centers.append(center)
        pairs.append((u, v))
        if len(centers) >= limit:
            break
    return centers, pairs


def peel(G: ConflictGraph, k: int, candidate_limit: int = PEEL_CANDIDATE_LIMIT):
    """
    Greedily removes up to k disjoint independent balls from G.

    Each step scores candidate balls by how many still-uncovered vertices they
    contain and keeps the best one, restricted to the uncovered vertices.

    Args:
        G (ConflictGraph): Graph with source vectors.
        k (int): Number of sets to peel.
        candidate_limit (int): Distinct centers scored per step.

    Returns:
        tuple: (list of IndependentBall with members as vertex positions of G,
        residual ConflictGraph over the uncovered vertices).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if G.vectors is None:
        raise GraphConstructionError("peeling needs a graph with source vectors")
    if k == 0:
        return [], G
    vf = as_float(G.vectors)
    uncovered = np.ones(G.vertex_count, dtype=bool)
    peeled = []
    for step in range(k):
        if not uncovered.any():
            break
        centers, pairs = _candidate_centers(G, uncovered, candidate_limit)
        if not centers:
            logger.info("Peeling stopped after %d sets: no pair at ip -8 among uncovered vertices", step)
            break
        c = np.asarray(centers, dtype=np.float32)
        scores = (np.rint(vf[uncovered] @ c.T) >= BALL_THRESHOLD).sum(axis=0)
        best = int(np.argmax(scores))
        if scores[best] == 0:
            break
        hit = (np.rint(vf @ c[best]) >= BALL_THRESHOLD) & uncovered
        members = np.flatnonzero(hit)
        peeled.append(IndependentBall(center=np.asarray(centers[best]), members=members, pair=pairs[best]))
        uncovered &= ~hit
        logger.info("Peeled set %d: %d vertices, %d left", step + 1, members.size, int(uncovered.sum()))
    residual = G.induced(np.flatnonzero(uncovered))
    return peeled, residual
