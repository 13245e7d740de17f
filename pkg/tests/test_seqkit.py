import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from insdel.errors import InvalidInputError, ResourceLimitError
from insdel.seqkit import (
    ErrorKind,
    ErrorModel,
    LcsIndex,
    SymbolString,
    alignment,
    bfs_insdel_distance,
    decodable_under,
    dumps_strings,
    error_ball,
    format_symbols,
    insdel_distance,
    lcs,
    lcs_of_code,
    loads_strings,
    parse_symbols,
    partition_by_blocks,
    radius_from_lcs,
)

words = st.lists(st.integers(0, 2), max_size=12)


def naive_lcs(a, b):
    t = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t[i + 1][j + 1] = t[i][j] + 1 if x == y else max(t[i][j + 1], t[i + 1][j])
    return t[-1][-1]


def test_lcs_examples():
    assert lcs("0110", "0110") == 4
    assert lcs("", "0110") == 0
    assert lcs("1100", "0011") == 2


def test_distance_examples():
    assert insdel_distance("101", "101") == 0
    assert insdel_distance("100", "1100") == 1
    assert insdel_distance("1100", "0011") == 4
    assert bfs_insdel_distance("1100", "0011") == 4


def test_code_lcs_examples():
    assert lcs_of_code(["00", "11"]) == 0
    assert lcs_of_code(["010", "011"]) == 2
    assert lcs_of_code(["0110"]) == 0


def test_radius_examples():
    assert radius_from_lcs(["00", "11"]) == 1
    assert decodable_under(["00", "11"], ErrorModel(ErrorKind.DELETIONS, 1))
    assert not decodable_under(["00", "11"], ErrorModel(ErrorKind.DELETIONS, 2))
    assert radius_from_lcs(["0101", "0110"]) == 0
    with pytest.raises(InvalidInputError):
        radius_from_lcs(["01", "01"])


@pytest.mark.parametrize("kind", list(ErrorKind))
def test_decodable_examples(kind):
    assert decodable_under(["000", "111"], ErrorModel(kind, 1))


def test_full_deletion_collides():
    assert not decodable_under(["000", "111"], ErrorModel(ErrorKind.DELETIONS, 3))


def test_alphabet_mismatch_rejected():
    with pytest.raises(InvalidInputError):
        lcs(SymbolString((0, 1), 2), SymbolString((0, 1), 3))
    with pytest.raises(InvalidInputError):
        SymbolString((0, 3), 3)


def test_error_ball_sizes():
    ball = error_ball("0101", ErrorModel(ErrorKind.DELETIONS, 1), 2)
    assert ball == {(0, 1, 1), (1, 0, 1), (0, 1, 0), (0, 0, 1), (0, 1, 0, 1)}
    with pytest.raises(ResourceLimitError):
        error_ball("0101", ErrorModel(ErrorKind.INSERTIONS, 4), 3, node_budget=100)


@given(words, words)
def test_lcs_matches_quadratic_dp(a, b):
    assert lcs(a, b) == naive_lcs(a, b)


@settings(max_examples=60)
@given(st.lists(st.integers(0, 1), max_size=6), st.lists(st.integers(0, 1), max_size=6))
def test_distance_matches_bfs(a, b):
    assert insdel_distance(a, b) == bfs_insdel_distance(a, b)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=70))
def test_lcs_long_strings(a):
    b = a[::-1]
    assert lcs(a, b) == naive_lcs(a, b)


@pytest.mark.parametrize("m", [5, 31, 32, 40, 63])
def test_lcs_index_against_scalar(m):
    rng = np.random.default_rng(m)
    rows = rng.integers(0, 3, size=(20, m))
    idx = LcsIndex(rows)
    s = rng.integers(0, 3, size=m + 7).tolist()
    got = idx.lcs(s)
    assert got.tolist() == [lcs(r.tolist(), s) for r in rows]
    assert idx.distances(s).tolist() == [len(s) + m - 2 * v for v in got.tolist()]


def test_lcs_index_sweep_matches_slices():
    rng = np.random.default_rng(3)
    rows = rng.integers(0, 2, size=(6, 9))
    s = rng.integers(0, 2, size=30).tolist()
    starts, checks = [0, 4, 11], [3, 9, 15]
    out = LcsIndex(rows).sweep(s, starts, checks)
    for a, st_ in enumerate(starts):
        for b, span in enumerate(checks):
            window = s[st_:st_ + span]
            assert out[a, b].tolist() == [lcs(r.tolist(), window) for r in rows]


@given(words, words)
def test_alignment_is_optimal(a, b):
    ops = alignment(a, b)
    matches = [(i, j) for op, i, j in ops if op == "M"]
    assert len(matches) == lcs(a, b)
    assert all(a[i] == b[j] for i, j in matches)
    assert sum(op == "D" for op, _, _ in ops) == len(a) - len(matches)
    assert sum(op == "I" for op, _, _ in ops) == len(b) - len(matches)


def test_partition_by_blocks_covers_string():
    c, s = "00110011", "0010111"
    ops = alignment(c, s)
    cuts = partition_by_blocks(len(c), [4], ops)
    assert len(cuts) == 1 and 0 <= cuts[0] <= len(s)


def test_symbol_format_round_trip():
    strings = [SymbolString((0, 11, 3), 12), SymbolString((), 12)]
    assert loads_strings(dumps_strings(strings, 12)) == strings
    assert parse_symbols(format_symbols((1, 0, 1), 2), 2).symbols == (1, 0, 1)


def test_decodable_small_exhaustive():
    # every pair of distinct binary words of length 3 at t = 1
    for a, b in itertools.combinations(itertools.product((0, 1), repeat=3), 2):
        expect = naive_lcs(a, b) < 2
        assert decodable_under([a, b], ErrorModel(ErrorKind.DELETIONS, 1)) == expect
