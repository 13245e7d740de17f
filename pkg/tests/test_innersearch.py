import itertools

import numpy as np
import pytest

from insdel.errors import ConstructionFailure, InvalidInputError
from insdel.innersearch import (
    CodeTable,
    density_ok,
    dumps_table,
    greedy_search,
    inner_decode,
    inner_encode,
    loads_table,
    search_dense_binary,
    search_kary,
)
from insdel.seqkit import ErrorKind, ErrorModel, decodable_under, insdel_distance, lcs, radius_from_lcs


def test_dense_binary_example():
    table = search_dense_binary(8, "1/4", "1/2")
    assert len(table) >= 2
    assert radius_from_lcs(table.codewords) >= 2
    assert table.check() == []
    window, need = table.density
    assert all(density_ok(w, window, need) for w in table.codewords)
    assert all(w[0] == 1 and w[-1] == 1 for w in table.codewords)


def test_dense_binary_bad_delta():
    with pytest.raises(InvalidInputError):
        search_dense_binary(8, 1, "1/2")


def test_all_ones_is_dense():
    assert density_ok([1] * 12, 5, 5)
    assert not density_ok([1, 0, 0, 1], 2, 1)


def test_kary_example():
    table = search_kary(6, 4, "1/2")
    words = table.codewords
    assert max(lcs(a, b) for a, b in itertools.combinations(words, 2)) <= 2


def test_kary_tau_zero_is_everything():
    table = search_kary(3, 3, 0)
    assert len(table) == 27


def test_kary_lcs_zero_size():
    # pairwise LCS 0 over a binary alphabet: one word per symbol at most
    table = search_kary(4, 2, "3/4")
    assert sorted(table.codewords) == [(0, 0, 0, 0), (1, 1, 1, 1)]


def test_lex_search_is_maximal():
    table = greedy_search(5, 2, 2)
    words = set(table.codewords)
    for cand in itertools.product((0, 1), repeat=5):
        if cand not in words:
            assert max(lcs(cand, w) for w in words) > 2


def test_lex_dfs_matches_flat_scan():
    dfs = greedy_search(7, 2, 4, density=(3, 1), endpoints=True)
    # flat enumeration path: density window longer than m forces it
    flat = []
    for cand in itertools.product((0, 1), repeat=7):
        if cand[0] != 1 or cand[-1] != 1 or not density_ok(cand, 3, 1):
            continue
        if all(lcs(cand, w) <= 4 for w in flat):
            flat.append(cand)
    assert dfs.codewords == flat


def test_random_search_needs_a_stop():
    with pytest.raises(InvalidInputError):
        greedy_search(6, 2, 3, order="random")
    table = greedy_search(10, 2, 6, order="random", stall=200, seed=4)
    assert table.check() == []


def test_no_candidate_failure():
    with pytest.raises(ConstructionFailure):
        greedy_search(4, 2, 3, density=(2, 2), endpoints=True, max_size=1, order="random",
                      candidate_budget=0)


@pytest.mark.parametrize("m", [4, 5, 6])
def test_radius_confirmed_by_enumeration(m):
    table = search_kary(m, 2, "1/3")
    t = table.verified_radius
    code = table.codewords
    if len(code) >= 2:
        assert decodable_under(code, ErrorModel(ErrorKind.DELETIONS, t), k=2)
        assert not decodable_under(code, ErrorModel(ErrorKind.DELETIONS, t + 1), k=2)


def test_encode_decode_identity():
    table = search_kary(6, 3, "1/2")
    for i in range(len(table)):
        word = inner_encode(table, i)
        assert table.index_of(word) == i
        assert inner_decode(table, word, 0) == i
    assert len(set(table.codewords)) == len(table)
    with pytest.raises(InvalidInputError):
        inner_encode(table, len(table))


def test_decode_within_radius():
    table = search_kary(8, 2, "1/2")
    t = table.verified_radius
    rng = np.random.default_rng(1)
    for i, word in enumerate(table.codewords):
        w = list(word)
        for _ in range(t):
            del w[int(rng.integers(len(w)))]
        hits = [j for j, c in enumerate(table.codewords) if insdel_distance(c, w) <= t]
        assert hits == [i]
        assert inner_decode(table, w, t) == i


def test_decode_ambiguous_window():
    table = search_kary(4, 2, "1/4")
    assert inner_decode(table, table.codewords[0], 2 * table.m) is None


def test_table_file_round_trip():
    table = search_dense_binary(8, "1/4", "1/2")
    back = loads_table(dumps_table(table))
    assert back.codewords == table.codewords
    assert back.density == table.density
    assert back.verified_radius == table.verified_radius


def test_tampered_table_rejected():
    text = dumps_table(search_kary(6, 2, "1/3"))
    head, rest = text.split("\n", 3)[:3], text.split("\n", 3)[3]
    tampered = "\n".join(head[:2] + ["radius=5"]) + "\n" + rest
    with pytest.raises(InvalidInputError):
        loads_table(tampered)
    assert loads_table(tampered, verify=False).verified_radius == 5


def test_truncated_reverifies():
    table = search_kary(6, 2, "1/3")
    small = table.truncated(2)
    assert small.verified_radius == small.compute_radius()
    with pytest.raises(ConstructionFailure):
        table.truncated(len(table) + 1)


def test_codetable_rejects_ragged():
    with pytest.raises(InvalidInputError):
        CodeTable([[0, 1], [0, 1, 1]], 2)
