# File: src/hset/codec.py

import logging

import numpy as np

from src.errors import (
    AlphabetViolationError,
    NotInLatticeError,
    ShapeMismatchError,
    SizeMismatchError,
)
from src.golay.engine import GolayCode, build_golay
from src.hset.selection import HSelection, selection_from_vectors
from src.leech.engine import LENGTH, MinimalVectorSet, Shape, enumerate_M, leech_members, minimal_vectors

logger = logging.getLogger(__name__)

RECORD_SIZE = 6
# Records per shape, in file order.
LAYOUT = ((Shape.FOUR_FOUR, 552), (Shape.TWO_EIGHT, 48576), (Shape.THREE_ONE, 49152))
RECORD_COUNT = sum(count for _, count in LAYOUT)
FILE_SIZE = RECORD_COUNT * RECORD_SIZE

# Entry value for each 2-bit symbol.
ALPHABETS = {
    Shape.FOUR_FOUR: (-4, 0, 4),
    Shape.TWO_EIGHT: (-2, 0, 2),
    Shape.THREE_ONE: (-3, -1, 1, 3),
}

# Coordinate 4n-3 sits in the two lowest bits of byte n.
_WEIGHTS = np.array([1, 4, 16, 64], dtype=np.uint16)
_SHIFTS = np.array([0, 2, 4, 6], dtype=np.uint8)


def _lookup(shape: Shape) -> np.ndarray:
    # entry value + 4 -> symbol, 255 where the value is not in the alphabet
    table = np.full(9, 255, dtype=np.uint8)
    for symbol, value in enumerate(ALPHABETS[shape]):
        table[value + 4] = symbol
    return table


def _symbols(vectors: np.ndarray, shape: Shape) -> np.ndarray:
    v = np.asarray(vectors, dtype=np.int64)
    inside = (v >= -4) & (v <= 4)
    symbols = np.full(v.shape, 255, dtype=np.uint8)
    symbols[inside] = _lookup(shape)[v[inside] + 4]
    bad = np.argwhere(symbols == 255)
    if bad.size:
        r, c = bad[0]
        raise AlphabetViolationError(
            f"entry {int(v[r, c])} at coordinate {c + 1} of record {r} is not in the {shape.name} alphabet {ALPHABETS[shape]}")
    return symbols


def _pack(symbols: np.ndarray) -> np.ndarray:
    grouped = symbols.reshape(symbols.shape[0], RECORD_SIZE, 4).astype(np.uint16)
    return (grouped @ _WEIGHTS).astype(np.uint8)


def encode_vector(v, shape: Shape) -> bytes:
    """
    Six-byte record of one vector.

    Args:
        v: 24 integer entries.
        shape (Shape): Shape whose alphabet applies.

    Returns:
        bytes: Byte n is 64*y(4n) + 16*y(4n-1) + 4*y(4n-2) + y(4n-3).
    """
    row = np.asarray(v, dtype=np.int64).reshape(1, LENGTH)
    return _pack(_symbols(row, Shape(shape))).tobytes()


def _file_order(h: HSelection) -> np.ndarray:
    # stable: records of one shape keep the selection's order
    return np.argsort(h.shapes, kind="stable")


def encode_hset(h: HSelection) -> bytes:
    """
    DAT bytes of an H-selection over M_24.

    Records are grouped by shape in file layout order; inside a group the
    selection's own order is kept.
    """
    if len(h) != RECORD_COUNT:
        raise SizeMismatchError(f"{h.label} has {len(h)} vectors, the file format holds {RECORD_COUNT}")
    order = _file_order(h)
    vectors = h.vectors[order]
    shapes = h.shapes[order]
    out = []
    start = 0
    for shape, count in LAYOUT:
        block = shapes[start:start + count]
        if block.size != count or np.any(block != shape):
            raise SizeMismatchError(f"{h.label} does not have {count} {shape.name} vectors")
        out.append(_pack(_symbols(vectors[start:start + count], shape)))
        start += count
    data = np.concatenate(out).tobytes()
    logger.info("Encoded %s into %d bytes", h.label, len(data))
    return data


def _check_shapes(values: np.ndarray, shape: Shape, offset: int):
    nonzero = np.count_nonzero(values, axis=1)
    if shape == Shape.FOUR_FOUR:
        ok = nonzero == 2
    elif shape == Shape.TWO_EIGHT:
        ok = nonzero == 8
    else:
        ok = np.count_nonzero(np.abs(values) == 3, axis=1) == 1
    if not ok.all():
        r = int(np.flatnonzero(~ok)[0])
        raise ShapeMismatchError(f"record {offset + r} does not have the {shape.name} shape of its block")


def decode(data: bytes, code: GolayCode = None, base: MinimalVectorSet = None) -> HSelection:
    """
    Decodes a DAT file into an H-selection over M_24 in file order.

    Args:
        data (bytes): File content.
        code (GolayCode): Code for the membership test; the standard one by default.
        base (MinimalVectorSet): M built on the same code.

    Returns:
        HSelection: 98280 vectors, one per antipodal pair.

    Raises:
        SizeMismatchError, AlphabetViolationError, ShapeMismatchError,
        NotInLatticeError, AntipodalViolationError.
    """
    if len(data) != FILE_SIZE:
        raise SizeMismatchError(f"file has {len(data)} bytes, expected {FILE_SIZE}")
    if code is None:
        code = build_golay()
    if base is None:
        base = minimal_vectors() if code is build_golay() else enumerate_M(code)
    records = np.frombuffer(data, dtype=np.uint8).reshape(RECORD_COUNT, RECORD_SIZE)
    symbols = ((records[:, :, None] >> _SHIFTS) & 3).reshape(RECORD_COUNT, LENGTH)

    blocks = []
    start = 0
    for shape, count in LAYOUT:
        sym = symbols[start:start + count]
        alphabet = np.array(ALPHABETS[shape], dtype=np.int8)
        if np.any(sym >= alphabet.size):
            r, c = np.argwhere(sym >= alphabet.size)[0]
            raise AlphabetViolationError(f"record {start + r}, coordinate {c + 1}: symbol 3 is not used by {shape.name}")
        values = alphabet[sym]
        _check_shapes(values, shape, start)
        blocks.append(values)
        start += count
    vectors = np.concatenate(blocks)

    members = leech_members(vectors, code)
    if not members.all():
        r = int(np.flatnonzero(~members)[0])
        raise NotInLatticeError(
            f"record {r} decodes to {tuple(int(x) for x in vectors[r])}, which is not a lattice vector "
            "for this Golay code labeling")
    selection = selection_from_vectors(vectors, base, label="H_24[dat]")
    logger.info("Decoded %d records", RECORD_COUNT)
    return selection
