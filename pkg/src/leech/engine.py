# File: src/leech/engine.py

import itertools
import logging
import threading
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property

import numpy as np

from src.errors import EnumerationError, VectorNotInSetError
from src.golay.engine import GolayCode, build_golay, octads
from src.utils.helpers import pack_rows

logger = logging.getLogger(__name__)

LENGTH = 24
MIN_NORM = 32
# Largest |coordinate| of a minimal vector.
MAX_ENTRY = 4


class Shape(IntEnum):
    """The three entry patterns of minimal vectors, in canonical block order."""

    FOUR_FOUR = 0
    TWO_EIGHT = 1
    THREE_ONE = 2

    @property
    def label(self) -> str:
        return SHAPE_LABELS[self]


SHAPE_LABELS = {
    Shape.FOUR_FOUR: "(±4,0)",
    Shape.TWO_EIGHT: "(±2,0)",
    Shape.THREE_ONE: "(±3,±1)",
}

EXPECTED_SHAPE_COUNTS = {
    Shape.FOUR_FOUR: 1104,
    Shape.TWO_EIGHT: 97152,
    Shape.THREE_ONE: 98304,
}


@dataclass(eq=False)
class MinimalVectorSet:
    """
    Ordered norm-32 vectors with their shape tags.

    `source_ids` maps each row to its position in the full set M (None for M
    itself); `dimension` is the n of M_n.
    """

    vectors: np.ndarray
    shapes: np.ndarray
    dimension: int = 24
    label: str = "M_24"
    source_ids: np.ndarray = None

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @cached_property
    def index(self) -> dict:
        return {row.tobytes(): i for i, row in enumerate(self.vectors)}

    def _key(self, x):
        arr = np.asarray(x)
        if arr.shape != (LENGTH,) or not entries_in_range(arr):
            return None
        return arr.astype(np.int8).tobytes()

    def position(self, x) -> int:
        pos = self.index.get(self._key(x))
        if pos is None:
            raise VectorNotInSetError(f"{tuple(int(v) for v in np.ravel(x))} is not in {self.label} ({_describe(x)})")
        return pos

    def __contains__(self, x) -> bool:
        return self.index.get(self._key(x)) is not None

    @property
    def counts_by_shape(self) -> dict:
        counts = np.bincount(self.shapes, minlength=len(Shape))
        return {shape: int(counts[shape]) for shape in Shape}

    def negation_positions(self) -> np.ndarray:
        """Position of -x for every x; -1 where -x is missing."""
        index = self.index
        return np.array([index.get((-row).tobytes(), -1) for row in self.vectors], dtype=np.int64)

    def subset(self, mask: np.ndarray, dimension: int, label: str) -> "MinimalVectorSet":
        positions = np.flatnonzero(mask)
        base_ids = positions if self.source_ids is None else self.source_ids[positions]
        return MinimalVectorSet(vectors=self.vectors[positions], shapes=self.shapes[positions],
                                dimension=dimension, label=label, source_ids=base_ids)


def entries_in_range(vectors) -> np.ndarray:
    """Per row, whether every coordinate lies in -MAX_ENTRY..MAX_ENTRY."""
    return np.all(np.abs(np.asarray(vectors, dtype=np.int64)) <= MAX_ENTRY, axis=-1)


def _describe(x) -> str:
    shape = shape_of(x)
    return "not a minimal vector" if shape is None else f"shape {shape.label}"


def _sorted_block(block: np.ndarray) -> np.ndarray:
    # lexicographic on coordinates, coordinate 1 as the primary key
    return block[np.lexsort(block.T[::-1])]


def _four_four_vectors() -> np.ndarray:
    rows = []
    for p1, p2 in itertools.combinations(range(LENGTH), 2):
        for s1, s2 in itertools.product((0, 1), repeat=2):
            row = np.zeros(LENGTH, dtype=np.int8)
            row[p1] = 4 - 8 * s1
            row[p2] = 4 - 8 * s2
            rows.append(row)
    return np.array(rows, dtype=np.int8)


def _two_eight_vectors(code: GolayCode) -> np.ndarray:
    signs = np.array([c for c in itertools.product((0, 1), repeat=8) if sum(c) % 2 == 0], dtype=np.int8)
    values = 2 - 4 * signs
    octad_words = octads(code)
    out = np.zeros((octad_words.shape[0], signs.shape[0], LENGTH), dtype=np.int8)
    for o, word in enumerate(octad_words):
        out[o][:, np.flatnonzero(word)] = values
    return out.reshape(-1, LENGTH)


def _three_one_vectors(code: GolayCode) -> np.ndarray:
    b = code.words.astype(np.int8)
    base = 1 - 2 * b
    blocks = []
    for p in range(LENGTH):
        block = base.copy()
        block[:, p] = 6 * b[:, p] - 3
        blocks.append(block)
    return np.concatenate(blocks)


def enumerate_M(code: GolayCode) -> MinimalVectorSet:
    """
    Enumerates the 196560 minimal vectors shape by shape.

    Args:
        code (GolayCode): A validated Golay code.

    Returns:
        MinimalVectorSet: FourFour block, then TwoEight, then ThreeOne; each block
        sorted lexicographically.
    """
    blocks = [
        (Shape.FOUR_FOUR, _four_four_vectors()),
        (Shape.TWO_EIGHT, _two_eight_vectors(code)),
        (Shape.THREE_ONE, _three_one_vectors(code)),
    ]
    vectors = []
    shapes = []
    for shape, block in blocks:
        if block.shape[0] != EXPECTED_SHAPE_COUNTS[shape]:
            raise EnumerationError(f"{shape.name}: {block.shape[0]} vectors, expected {EXPECTED_SHAPE_COUNTS[shape]}")
        vectors.append(_sorted_block(block))
        shapes.append(np.full(block.shape[0], shape, dtype=np.uint8))
        logger.debug("enumerated %d %s vectors", block.shape[0], shape.label)

    result = MinimalVectorSet(vectors=np.concatenate(vectors), shapes=np.concatenate(shapes))
    if len(result.index) != len(result):
        raise EnumerationError("duplicate vectors across or within shapes")
    norms = (result.vectors.astype(np.int32) ** 2).sum(axis=1)
    if not np.all(norms == MIN_NORM):
        raise EnumerationError("enumerated vector with squared norm != 32")
    logger.info("Enumerated %d minimal vectors", len(result))
    return result


_minimal_vectors = None
_minimal_vectors_lock = threading.Lock()


def minimal_vectors() -> MinimalVectorSet:
    """Process-wide M, enumerated once on first use."""
    global _minimal_vectors
    with _minimal_vectors_lock:
        if _minimal_vectors is None:
            _minimal_vectors = enumerate_M(build_golay())
        return _minimal_vectors


def leech_members(vectors, code: GolayCode) -> np.ndarray:
    """
    Vectorized lattice membership test.

    Writes x_i = a + 2 b_i + 4 c_i + 8 d_i and checks that all coordinates share
    the parity a, that b is a codeword and that sum(c) = a (mod 2).

    Args:
        vectors: (N, 24) integer array.
        code (GolayCode): The code the lattice is built on.

    Returns:
        np.ndarray: Boolean array of length N.
    """
    v = np.asarray(vectors, dtype=np.int64)
    a = np.mod(v[:, :1], 2)
    same_parity = np.all(np.mod(v, 2) == a, axis=1)
    b = np.mod((v - a) // 2, 2)
    in_code = np.isin(pack_rows(b), code.packed)
    c = np.mod((v - a - 2 * b) // 4, 2)
    parity_ok = np.mod(c.sum(axis=1), 2) == a[:, 0]
    return same_parity & in_code & parity_ok


def leech_member(x, code: GolayCode) -> bool:
    """True iff x is a vector of the Leech lattice; False for malformed input."""
    try:
        arr = np.asarray(x)
    except (TypeError, ValueError):
        return False
    if arr.shape != (LENGTH,) or arr.dtype.kind not in "iu":
        return False
    return bool(leech_members(arr[None, :], code)[0])


def ip(x, y) -> int:
    return int(np.dot(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)))


def shape_of(x):
    """Shape of a minimal vector by its entry multiset, or None."""
    a = np.abs(np.asarray(x, dtype=np.int64))
    if a.shape != (LENGTH,) or int((a * a).sum()) != MIN_NORM:
        return None
    nonzero = np.count_nonzero(a)
    if nonzero == 2 and np.all(a[a > 0] == 4):
        return Shape.FOUR_FOUR
    if nonzero == 8 and np.all(a[a > 0] == 2):
        return Shape.TWO_EIGHT
    if nonzero == LENGTH and np.count_nonzero(a == 3) == 1:
        return Shape.THREE_ONE
    return None
