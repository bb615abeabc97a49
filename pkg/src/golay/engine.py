# File: src/golay/engine.py

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from src.errors import GolayConstructionError
from src.utils.helpers import pack_rows

logger = logging.getLogger(__name__)

# Leech's matrix C, rows as printed in the compact presentation. The print has
# 13 lines; the 11th repeats row 10 and the last two carry a stray leading 0.
# Rows 2..12 end in the 11 cyclic shifts of 10100011101.
_LEECH_ROWS = (
    "100000000000011111111111",
    "010000000000110100011101",
    "001000000000101000111011",
    "000100000000110001110110",
    "000010000000100011101101",
    "000001000000100111011010",
    "000000100000101110110100",
    "000000010000111101101000",
    "000000001000111011010001",
    "000000000100110110100011",
    "000000000010101101000111",
    "000000000001111010001110",
)

# Column of C (1-based) read as lattice coordinate i = 1..24. With this map
# x17..x24 is an octad and x9..x12, x13..x16 are parallel 2-flats of the affine
# space on its complement, which the laminated section conditions rely on.
LAMINATED_COLUMNS = (
    6, 7, 8, 9, 11, 13, 17, 20,
    10, 19, 22, 24,
    12, 15, 16, 21,
    1, 2, 3, 4, 5, 14, 18, 23,
)

EXPECTED_HISTOGRAM = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}

LENGTH = 24
DIMENSION = 12


@dataclass(frozen=True, eq=False)
class GolayCode:
    """The extended binary Golay code, all 4096 words materialized."""

    generator: np.ndarray
    words: np.ndarray
    weight_histogram: dict
    # words as sorted 24-bit integers, for membership lookups
    packed: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.words.shape[0]

    def __contains__(self, bits) -> bool:
        return is_codeword(bits, self)


def weight(w) -> int:
    """Number of 1-bits in a 24-bit word given as a bit sequence."""
    return int(np.count_nonzero(np.asarray(w)))


def _rows_to_matrix(rows) -> np.ndarray:
    return np.array([[int(ch) for ch in row] for row in rows], dtype=np.uint8)


def golay_from_rows(rows, columns=None) -> GolayCode:
    """
    Builds the span of a 12-row generator and checks it is the Golay code.

    Args:
        rows: 12 strings (or bit sequences) of length 24.
        columns: Optional 1-based column map; coordinate i takes column columns[i-1].

    Returns:
        GolayCode: The validated code.
    """
    generator = _rows_to_matrix(rows) if isinstance(rows[0], str) else np.asarray(rows, dtype=np.uint8)
    if generator.shape != (DIMENSION, LENGTH):
        raise GolayConstructionError(f"generator must be 12x24, got {generator.shape}")
    if columns is not None:
        generator = generator[:, np.asarray(columns) - 1]

    messages = (np.arange(1 << DIMENSION)[:, None] >> np.arange(DIMENSION)) & 1
    words = (messages @ generator.astype(np.int64)) % 2
    words = words.astype(np.uint8)

    packed = pack_rows(words)
    if np.unique(packed).size != words.shape[0]:
        raise GolayConstructionError("generator rows are linearly dependent")

    weights, counts = np.unique(words.sum(axis=1), return_counts=True)
    histogram = {int(w): int(c) for w, c in zip(weights, counts)}
    if histogram != EXPECTED_HISTOGRAM:
        raise GolayConstructionError(f"weight histogram {histogram} != {EXPECTED_HISTOGRAM}")

    return GolayCode(generator=generator, words=words, weight_histogram=histogram,
                     packed=np.sort(packed))


@lru_cache(maxsize=1)
def build_golay() -> GolayCode:
    """Constructs the code from Leech's generator in laminated coordinates."""
    code = golay_from_rows(_LEECH_ROWS, LAMINATED_COLUMNS)
    logger.debug("Golay code built: %s", code.weight_histogram)
    return code


def is_codeword(bits, code: GolayCode) -> bool:
    bits = np.asarray(bits)
    if bits.shape != (LENGTH,):
        return False
    value = pack_rows(bits[None, :] & 1)[0]
    pos = int(np.searchsorted(code.packed, value))
    return bool(pos < code.packed.size and code.packed[pos] == value)


def octads(code: GolayCode) -> np.ndarray:
    """
    Returns the 759 weight-8 codewords in canonical order: ascending as 24-bit
    integers with coordinate 1 the most significant bit.
    """
    words = code.words[code.words.sum(axis=1) == 8]
    order = np.argsort(pack_rows(words), kind="stable")
    return words[order]


def check_report(code: GolayCode) -> list:
    """Lines printed by `golay --check`."""
    lines = ["weight  count  expected"]
    passed = True
    for w, expected in EXPECTED_HISTOGRAM.items():
        got = code.weight_histogram.get(w, 0)
        passed &= got == expected
        lines.append(f"{w:>6}  {got:>5}  {expected:>8}")
    lines.append("octads: 759 (759 * 128 = 97152 vectors of shape (±2,0))")
    lines.append("note: the printed source lists 1, 729, 2576, 729, 1; 729 is read as 759, the classical value")
    lines.append("PASS" if passed and len(code) == 4096 else "FAIL")
    return lines


def dump_words(code: GolayCode, file_path: str):
    """Writes the 4096 words, one per line as 24 characters '0'/'1'."""
    with open(file_path, "w", encoding="utf-8") as f:
        for word in code.words:
            f.write("".join("1" if b else "0" for b in word) + "\n")
