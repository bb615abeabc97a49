# File: src/utils/helpers.py

import hashlib

import numpy as np

from src.config import IP_BLOCK_CELLS, IP_BLOCK_ROWS, RNG_ALGORITHM


def make_rng(seed: int) -> np.random.Generator:
    """Returns the seeded generator every randomized operation draws from."""
    if RNG_ALGORITHM != "PCG64":
        raise ValueError(f"Unsupported RNG algorithm: {RNG_ALGORITHM}")
    return np.random.Generator(np.random.PCG64(seed))


def spawn_seeds(seed: int, count: int, salt: int = 0) -> list:
    """Derives `count` independent 64-bit seeds from a master seed and a salt."""
    children = np.random.SeedSequence([seed, salt]).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def sha256_file(file_path: str) -> str:
    digest = hashlib.sha256()
    with open(file_path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def as_float(vectors: np.ndarray) -> np.ndarray:
    # float32 is exact here: every inner product of norm-32 vectors is a small integer.
    return np.ascontiguousarray(vectors, dtype=np.float32)


def iter_ip_blocks(left: np.ndarray, right: np.ndarray = None, block_rows: int = IP_BLOCK_ROWS):
    """
    Yields (start, block) where block holds the inner products of rows
    left[start:start+block_rows] against every row of `right`.

    Args:
        left (np.ndarray): (N, 24) integer vectors.
        right (np.ndarray): (M, 24) integer vectors; defaults to `left`.
        block_rows (int): Rows of `left` per block.

    Returns:
        Iterator of (int, np.ndarray) with int32 blocks of shape (rows, M).
    """
    lf = as_float(left)
    rf = lf if right is None else as_float(right)
    block_rows = max(1, min(block_rows, IP_BLOCK_CELLS // max(rf.shape[0], 1)))
    for start in range(0, lf.shape[0], block_rows):
        block = lf[start:start + block_rows] @ rf.T
        yield start, np.rint(block).astype(np.int32)


def pack_rows(bit_rows: np.ndarray) -> np.ndarray:
    """Packs each row of an (N, 24) 0/1 array into an integer, coordinate 1 as the most significant bit."""
    weights = np.left_shift(np.int64(1), np.arange(bit_rows.shape[1] - 1, -1, -1, dtype=np.int64))
    return (np.asarray(bit_rows, dtype=np.int64) * weights).sum(axis=1)
