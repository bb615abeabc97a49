# File: tests/test_leech.py

import numpy as np
import pytest

from src.errors import VectorNotInSetError
from src.leech.engine import (
    EXPECTED_SHAPE_COUNTS,
    Shape,
    ip,
    leech_member,
    leech_members,
    shape_of,
)
from src.leech.stats import (
    DISTANCE_TABLE,
    IP_HISTOGRAM,
    aggregated_histogram,
    check_histogram,
    distance_squared,
    distance_squared_from_ip,
    histograms_for,
    ip_histogram,
    pair_scan,
    sample_positions,
)


def test_kissing_number_and_shape_counts(M):
    assert len(M) == 196560
    assert M.counts_by_shape == EXPECTED_SHAPE_COUNTS
    assert M.counts_by_shape[Shape.FOUR_FOUR] == 1104
    assert M.counts_by_shape[Shape.TWO_EIGHT] == 97152
    assert M.counts_by_shape[Shape.THREE_ONE] == 98304


def test_every_vector_has_norm_32_and_is_in_the_lattice(M, code):
    norms = (M.vectors.astype(np.int32) ** 2).sum(axis=1)
    assert np.all(norms == 32)
    assert leech_members(M.vectors, code).all()


def test_canonical_order_is_by_shape_then_lexicographic(M):
    assert np.all(np.diff(M.shapes.astype(np.int8)) >= 0)
    for shape in Shape:
        block = M.vectors[M.shapes == shape]
        keys = [tuple(row) for row in block[:500].tolist()]
        assert keys == sorted(keys)


def test_closed_under_negation_and_duplicate_free(M):
    neg = M.negation_positions()
    assert np.all(neg >= 0)
    assert np.array_equal(neg[neg], np.arange(len(M)))
    assert len(M.index) == len(M)


def test_shape_of_agrees_with_tags(M):
    rng = np.random.default_rng(3)
    for pos in rng.integers(0, len(M), size=300):
        assert shape_of(M.vectors[pos]) == M.shapes[pos]
    assert shape_of(np.ones(24, dtype=np.int8)) is None


def test_membership_examples(code):
    x = np.zeros(24, dtype=np.int64)
    x[0] = x[1] = 4
    assert leech_member(x, code)
    y = np.zeros(24, dtype=np.int64)
    y[0] = 8
    assert leech_member(y, code)


def test_odd_sign_flip_of_a_two_eight_vector_fails(M, code):
    v = M.vectors[M.shapes == Shape.TWO_EIGHT][0].astype(np.int64).copy()
    assert leech_member(v, code)
    i = int(np.flatnonzero(v)[0])
    v[i] = -v[i]
    assert int((v * v).sum()) == 32
    assert not leech_member(v, code)


def test_non_enumerated_norm_32_vectors_fail(M, code):
    # moving the 3 of a (±3,±1) vector to another coordinate keeps norm 32 but leaves M
    rng = np.random.default_rng(11)
    three_one = M.vectors[M.shapes == Shape.THREE_ONE]
    trials = three_one[rng.integers(0, three_one.shape[0], size=2000)].astype(np.int64)
    moved = []
    for v in trials:
        p = int(np.flatnonzero(np.abs(v) == 3)[0])
        q = (p + 1) % 24
        w = v.copy()
        w[p], w[q] = np.sign(v[p]) * 1, np.sign(v[q]) * 3
        moved.append(w)
    moved = np.array(moved)
    known = np.array([row.astype(np.int8).tobytes() in M.index for row in moved])
    assert not leech_members(moved[~known], code).any()


def test_leech_member_is_total(code):
    assert not leech_member("not a vector", code)
    assert not leech_member(np.zeros(23, dtype=np.int64), code)
    assert not leech_member(np.zeros(24, dtype=float), code)
    assert leech_member(np.zeros(24, dtype=np.int64), code)


def test_position_and_membership(M):
    assert M.position(M.vectors[1234]) == 1234
    assert M.vectors[1234] in M
    with pytest.raises(VectorNotInSetError, match="not a minimal vector"):
        M.position(np.zeros(24, dtype=np.int8))


def test_position_error_names_the_shape(M, M_n):
    outside = next(row for row in M.vectors[::-1] if row not in M_n(8))
    with pytest.raises(VectorNotInSetError, match="shape"):
        M_n(8).position(outside)


def test_out_of_range_coordinates_are_not_wrapped(M):
    wrapped = M.vectors[0].astype(np.int64)
    wrapped[0] += 256
    assert wrapped not in M
    with pytest.raises(VectorNotInSetError):
        M.position(wrapped)
    with pytest.raises(VectorNotInSetError):
        ip_histogram(M, wrapped)


def test_inner_product_histogram_around_vectors(M):
    for pos in (0, 1104, len(M) - 1):
        h = ip_histogram(M, M.vectors[pos])
        assert h == IP_HISTOGRAM
        assert h[-16] == 4600
        assert h[32] == 1


def test_histogram_rejects_foreign_vector(M):
    with pytest.raises(VectorNotInSetError):
        ip_histogram(M, np.zeros(24, dtype=np.int8))


def test_sampled_histograms_match_on_100_vectors(M):
    positions = sample_positions(M, 100, seed=2024)
    assert positions.size == 100
    histograms = histograms_for(M, positions, jobs=2)
    assert all(check_histogram(h) for h in histograms)
    assert all(sum(h.values()) == 196560 for h in histograms)


def test_sampling_is_seeded(M):
    assert np.array_equal(sample_positions(M, 50, 9), sample_positions(M, 50, 9))


def test_no_plus_minus_8_in_dimension_8(M_n):
    E8 = M_n(8)
    for pos in range(0, len(E8), 17):
        h = ip_histogram(E8, E8.vectors[pos])
        assert 8 not in h and -8 not in h
        assert h == {32: 1, 16: 56, 0: 126, -16: 56, -32: 1}


def test_distance_squared_table(M):
    assert distance_squared_from_ip(-16) == 96
    assert distance_squared_from_ip(32) == 0
    assert distance_squared_from_ip(-32) == 128
    for value, d2 in DISTANCE_TABLE.items():
        assert distance_squared_from_ip(value) == d2
    x = M.vectors[0]
    assert distance_squared(x, x) == 0
    assert distance_squared(x, -x) == 128
    y = M.vectors[77]
    assert distance_squared(x, y) == 2 * (32 - ip(x, y))


def test_pair_scan_on_small_section(M_n):
    scan = pair_scan(M_n(8).vectors)
    assert set(scan.support) == {16, 0, -16, -32}
    assert scan.min_ip == -32
    assert scan.diameter_squared == 128


def test_aggregated_histogram_small_section(M_n):
    E8 = M_n(8)
    total = aggregated_histogram(E8)
    assert total == {32: 240, 16: 240 * 56, 0: 240 * 126, -16: 240 * 56, -32: 240}


@pytest.mark.slow
def test_full_pairs_histogram(M):
    total = aggregated_histogram(M, jobs=4)
    assert total == {value: count * len(M) for value, count in IP_HISTOGRAM.items()}
