# File: src/laminated/sections.py

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from src.errors import InvalidDimensionError
from src.leech.engine import MinimalVectorSet, Shape, minimal_vectors

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Condition:
    """A linear condition on 1-based coordinates: equal, zero or sum_zero."""

    kind: str
    coords: tuple

    def holds(self, vectors: np.ndarray) -> np.ndarray:
        cols = vectors[:, [i - 1 for i in self.coords]].astype(np.int32)
        if self.kind == "equal":
            return cols[:, 0] == cols[:, 1]
        if self.kind == "zero":
            return cols[:, 0] == 0
        if self.kind == "sum_zero":
            return cols.sum(axis=1) == 0
        raise ValueError(f"Unknown condition kind: {self.kind}")

    def __str__(self) -> str:
        names = [f"x{i}" for i in self.coords]
        if self.kind == "equal":
            return f"{names[0]} = {names[1]}"
        if self.kind == "zero":
            return f"{names[0]} = 0"
        return " + ".join(names) + " = 0"


def _eq(i, j):
    return Condition("equal", (i, j))


def _zero(i):
    return Condition("zero", (i,))


def _sum(i, j, k):
    return Condition("sum_zero", (i, j, k))


# Condition added when stepping down from dimension n + 1 to n.
ADDED_CONDITIONS = {
    23: _eq(24, 23), 22: _eq(23, 22), 21: _zero(22), 20: _zero(21), 19: _zero(20),
    18: _sum(19, 18, 17), 17: _zero(19), 16: _zero(18), 15: _zero(16),
    14: _sum(15, 14, 13), 13: _zero(15), 12: _zero(14), 11: _eq(12, 11),
    10: _eq(11, 10), 9: _zero(10), 8: _zero(9), 7: _eq(8, 7), 6: _eq(7, 6),
    5: _zero(6), 4: _zero(5), 3: _zero(4), 2: _sum(3, 2, 1), 1: _zero(3),
}

ISOMORPHISMS = {1: "A1, Z", 2: "A2", 3: "D3, A3", 4: "D4", 5: "D5", 6: "E6", 7: "E7", 8: "E8", 16: "BW16"}

# n -> (#M_n, (±4,0), (±2,0), (±3,±1))
SECTION_COUNTS = {
    24: (196560, 1104, 97152, 98304), 23: (93150, 926, 47168, 45056),
    22: (49896, 840, 27552, 21504), 21: (27720, 840, 26880, 0),
    20: (17400, 760, 16640, 0), 19: (10668, 684, 9984, 0),
    18: (7398, 486, 6912, 0), 17: (5346, 482, 4864, 0),
    16: (4320, 480, 3840, 0), 15: (2340, 420, 1920, 0),
    14: (1422, 270, 1152, 0), 13: (906, 266, 640, 0),
    12: (648, 264, 384, 0), 11: (438, 182, 256, 0),
    10: (336, 144, 192, 0), 9: (272, 144, 128, 0),
    8: (240, 112, 128, 0), 7: (126, 62, 64, 0),
    6: (72, 40, 32, 0), 5: (40, 40, 0, 0),
    4: (24, 24, 0, 0), 3: (12, 12, 0, 0),
    2: (6, 6, 0, 0), 1: (2, 2, 0, 0),
}


@dataclass(frozen=True)
class LaminatedSpec:
    n: int
    conditions: tuple
    cumulative: bool = True

    @property
    def lattice_name(self) -> str:
        return f"Λ{self.n}max" if self.n in (11, 12, 13) else f"Λ{self.n}"

    @property
    def isomorphic_to(self) -> str:
        return ISOMORPHISMS.get(self.n, "")


@dataclass(frozen=True)
class SectionCounts:
    n: int
    total: int
    four_four: int
    two_eight: int
    three_one: int

    def as_row(self) -> tuple:
        return (self.total, self.four_four, self.two_eight, self.three_one)


def _check_dimension(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= 24:
        raise InvalidDimensionError(f"dimension must be an integer in 1..24, got {n!r}")
    return int(n)


def laminated_spec(n: int) -> LaminatedSpec:
    """Cumulative conditions for M_n, newest (highest n) first."""
    n = _check_dimension(n)
    return LaminatedSpec(n=n, conditions=tuple(ADDED_CONDITIONS[m] for m in range(23, n - 1, -1)))


def section_counts(S: MinimalVectorSet) -> SectionCounts:
    counts = S.counts_by_shape
    return SectionCounts(n=S.dimension, total=len(S), four_four=counts[Shape.FOUR_FOUR],
                         two_eight=counts[Shape.TWO_EIGHT], three_one=counts[Shape.THREE_ONE])


def slice_section(M: MinimalVectorSet, n: int) -> MinimalVectorSet:
    """
    Filters M down to M_n.

    Args:
        M (MinimalVectorSet): The full minimal-vector set.
        n (int): Target dimension, 1..24.

    Returns:
        MinimalVectorSet: The vectors meeting every condition for n, in M's order.
    """
    spec = laminated_spec(n)
    mask = np.ones(len(M), dtype=bool)
    for condition in spec.conditions:
        mask &= condition.holds(M.vectors)
    section = M.subset(mask, dimension=spec.n, label=f"M_{spec.n}")
    logger.debug("M_%d: %s", spec.n, section_counts(section).as_row())
    return section


@lru_cache(maxsize=None)
def section(n: int) -> MinimalVectorSet:
    """Cached M_n over the process-wide M."""
    return slice_section(minimal_vectors(), n)


def section_of(vectors: np.ndarray) -> np.ndarray:
    """Smallest n with each vector in M_n (1 when every condition holds)."""
    vectors = np.atleast_2d(vectors)
    result = np.ones(vectors.shape[0], dtype=np.int64)
    alive = np.ones(vectors.shape[0], dtype=bool)
    for m in range(23, 0, -1):
        failed = alive & ~ADDED_CONDITIONS[m].holds(vectors)
        result[failed] = m + 1
        alive &= ~failed
    return result


def _integer_rank(rows: list) -> int:
    # fraction-free elimination; rows are rescaled by their gcd after each step
    m = [list(r) for r in rows]
    rank = 0
    width = len(m[0]) if m else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank]
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            if f == 0:
                continue
            row = [a * p[col] - f * b for a, b in zip(m[r], p)]
            g = 0
            for value in row:
                g = gcd(g, value)
            m[r] = [value // g for value in row] if g > 1 else row
        rank += 1
    return rank


def rank_of_span(S: MinimalVectorSet) -> int:
    """Exact rank of the vectors of S, computed on the integer Gram matrix V^T V."""
    v = S.vectors.astype(np.int64)
    gram = v.T @ v
    return _integer_rank([[int(a) for a in row] for row in gram])


def reproduction_table(M: MinimalVectorSet) -> list:
    """
    Rows for `counts --all`: the computed counts next to the tabulated ones.

    Returns:
        list: (n, lattice name, added condition, computed row, expected row, passed).
    """
    rows = []
    for n in range(24, 0, -1):
        spec = laminated_spec(n)
        counts = section_counts(slice_section(M, n)).as_row()
        expected = SECTION_COUNTS[n]
        added = str(ADDED_CONDITIONS[n]) if n < 24 else ""
        rows.append((n, spec.lattice_name, added, counts, expected, counts == expected))
    return rows
