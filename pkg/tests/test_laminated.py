# File: tests/test_laminated.py

import numpy as np
import pytest

from src.errors import InvalidDimensionError
from src.laminated.sections import (
    ADDED_CONDITIONS,
    SECTION_COUNTS,
    laminated_spec,
    rank_of_span,
    reproduction_table,
    section_counts,
    section_of,
    slice_section,
)
from src.leech.engine import Shape, ip


def test_conditions_are_cumulative():
    assert laminated_spec(24).conditions == ()
    for n in range(1, 24):
        spec = laminated_spec(n)
        assert spec.conditions == laminated_spec(n + 1).conditions + (ADDED_CONDITIONS[n],)
    assert len(laminated_spec(1).conditions) == 23


def test_added_condition_labels():
    assert str(ADDED_CONDITIONS[23]) == "x24 = x23"
    assert str(ADDED_CONDITIONS[18]) == "x19 + x18 + x17 = 0"
    assert str(ADDED_CONDITIONS[1]) == "x3 = 0"


@pytest.mark.parametrize("n", [0, 25, -3, 2.5, "8"])
def test_invalid_dimensions(n):
    with pytest.raises(InvalidDimensionError):
        laminated_spec(n)


def test_full_reproduction_table(M):
    rows = reproduction_table(M)
    assert [row[0] for row in rows] == list(range(24, 0, -1))
    for n, name, added, counts, expected, passed in rows:
        assert counts == SECTION_COUNTS[n], f"n={n}"
        assert passed


@pytest.mark.parametrize("n,total", [(24, 196560), (22, 49896), (16, 4320), (13, 906), (8, 240), (2, 6), (1, 2)])
def test_section_sizes(M_n, n, total):
    assert len(M_n(n)) == total
    assert section_counts(M_n(n)).total == total


def test_dimension_8_split(M_n):
    counts = section_counts(M_n(8))
    assert (counts.four_four, counts.two_eight, counts.three_one) == (112, 128, 0)


def test_dimension_1_is_an_antipodal_pair(M_n):
    M1 = M_n(1)
    assert len(M1) == 2
    assert ip(M1.vectors[0], M1.vectors[1]) == -32


def test_no_three_one_vectors_below_22(M_n):
    for n in range(1, 22):
        assert M_n(n).counts_by_shape[Shape.THREE_ONE] == 0


def test_sections_are_nested(M_n):
    for n in range(1, 24):
        inner = set(M_n(n).source_ids.tolist())
        outer = M_n(n + 1).source_ids
        outer = set(range(196560)) if outer is None else set(outer.tolist())
        assert inner <= outer


def test_slice_keeps_canonical_order(M, M_n):
    ids = M_n(16).source_ids
    assert np.all(np.diff(ids) > 0)
    assert np.array_equal(M.vectors[ids], M_n(16).vectors)
    assert M_n(16).label == "M_16"


@pytest.mark.parametrize("n", range(1, 25))
def test_rank_equals_dimension(M_n, n):
    assert rank_of_span(M_n(n)) == n


def test_lattice_names():
    assert laminated_spec(13).lattice_name == "Λ13max"
    assert laminated_spec(8).isomorphic_to == "E8"
    assert laminated_spec(16).isomorphic_to == "BW16"


def test_section_of(M, M_n):
    assert np.all(section_of(M_n(1).vectors) == 1)
    assert np.all(section_of(M_n(8).vectors) <= 8)
    outside = np.setdiff1d(np.arange(len(M)), M_n(23).source_ids)[:50]
    assert np.all(section_of(M.vectors[outside]) == 24)
    for n in (3, 9, 17):
        found = section_of(M_n(n).vectors)
        assert found.max() == n


def test_slice_matches_cached_section(M, M_n):
    fresh = slice_section(M, 12)
    assert np.array_equal(fresh.vectors, M_n(12).vectors)
