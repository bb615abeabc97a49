# File: src/leech/stats.py

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.config import IP_BLOCK_CELLS, IP_BLOCK_ROWS
from src.leech.engine import MIN_NORM, MinimalVectorSet, ip
from src.utils.helpers import as_float, iter_ip_blocks, make_rng

logger = logging.getLogger(__name__)

# Inner-product histogram of M around any of its vectors.
IP_HISTOGRAM = {32: 1, 16: 4600, 8: 47104, 0: 93150, -8: 47104, -16: 4600, -32: 1}

# Squared distance for each inner product that occurs between vectors of M.
DISTANCE_TABLE = {32: 0, 16: 32, 8: 48, 0: 64, -8: 80, -16: 96, -32: 128}

_OFFSET = MIN_NORM


@dataclass
class PairScan:
    """Inner products over ordered pairs i != j of a vector list."""

    support: dict
    min_ip: int
    max_ip: int

    @property
    def diameter_squared(self) -> int:
        return distance_squared_from_ip(self.min_ip)


def distance_squared_from_ip(value: int) -> int:
    return 2 * (MIN_NORM - value)


def distance_squared(x, y) -> int:
    """Squared Euclidean distance; equals 2 * (32 - ip(x, y)) on M."""
    return ip(x, x) + ip(y, y) - 2 * ip(x, y)


def _row_histograms(block: np.ndarray) -> np.ndarray:
    rows = block.shape[0]
    width = 2 * _OFFSET + 1
    keys = np.arange(rows)[:, None] * width + (block + _OFFSET)
    return np.bincount(keys.ravel(), minlength=rows * width).reshape(rows, width)


def _block_rows(S: MinimalVectorSet) -> int:
    return max(1, min(IP_BLOCK_ROWS, IP_BLOCK_CELLS // max(len(S), 1)))


def _as_dict(counts: np.ndarray) -> dict:
    return {int(v) - _OFFSET: int(c) for v, c in enumerate(counts) if c}


def ip_histogram(S: MinimalVectorSet, x) -> dict:
    """
    Counts of <x, y> over all y in S.

    Args:
        S (MinimalVectorSet): The vector set.
        x: A vector of S.

    Returns:
        dict: inner product -> count.
    """
    S.position(x)
    values = S.vectors.astype(np.int32) @ np.asarray(x, dtype=np.int32)
    return _as_dict(np.bincount(values + _OFFSET, minlength=2 * _OFFSET + 1))


def histograms_for(S: MinimalVectorSet, positions, jobs: int = 1) -> list:
    """Histograms around several base vectors, computed in blocks."""
    positions = np.asarray(positions, dtype=np.int64)
    step = _block_rows(S)
    chunks = [positions[i:i + step] for i in range(0, positions.size, step)]
    right = as_float(S.vectors)

    def work(chunk):
        block = np.rint(as_float(S.vectors[chunk]) @ right.T).astype(np.int32)
        return [_as_dict(row) for row in _row_histograms(block)]

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(work, chunks))
    return [h for part in results for h in part]


def sample_positions(S: MinimalVectorSet, sample: int, seed: int) -> np.ndarray:
    rng = make_rng(seed)
    count = min(sample, len(S))
    return np.sort(rng.choice(len(S), size=count, replace=False))


def aggregated_histogram(S: MinimalVectorSet, jobs: int = 1) -> dict:
    """Histogram summed over every base vector of S (all ordered pairs, i = j included)."""
    totals = np.zeros(2 * _OFFSET + 1, dtype=np.int64)
    step = _block_rows(S)
    starts = list(range(0, len(S), step))
    right = as_float(S.vectors)

    def work(start):
        block = np.rint(as_float(S.vectors[start:start + step]) @ right.T).astype(np.int32)
        return np.bincount((block + _OFFSET).ravel(), minlength=2 * _OFFSET + 1)

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for i, counts in enumerate(pool.map(work, starts)):
            totals += counts
            if i % 16 == 0:
                logger.debug("full-pairs scan: block %d/%d", i + 1, len(starts))
    return _as_dict(totals)


def pair_scan(vectors: np.ndarray) -> PairScan:
    """Support, minimum and maximum of <x_i, x_j> over i != j."""
    n = vectors.shape[0]
    counts = np.zeros(2 * _OFFSET + 1, dtype=np.int64)
    for start, block in iter_ip_blocks(vectors):
        rows = np.arange(start, start + block.shape[0])
        block[np.arange(block.shape[0]), rows] = np.iinfo(np.int32).min
        valid = block[block != np.iinfo(np.int32).min]
        counts += np.bincount(valid + _OFFSET, minlength=2 * _OFFSET + 1)
    support = _as_dict(counts)
    if n < 2:
        return PairScan(support={}, min_ip=MIN_NORM, max_ip=MIN_NORM)
    return PairScan(support=support, min_ip=min(support), max_ip=max(support))


def check_histogram(histogram: dict, expected: dict = None) -> bool:
    return histogram == (IP_HISTOGRAM if expected is None else expected)
