import itertools
from fractions import Fraction

import numpy as np
import pytest

from insdel.channel import STRATEGIES, corrupt
from insdel.errors import ContractViolation, DecodeFailure, InvalidInputError, ParameterError
from insdel.gf import gf
from insdel.innersearch import search_kary
from insdel.listconcat import (
    ConcatCodeSpec,
    concat_encode,
    coverage_census,
    dumps_spec,
    list_concat_decode,
    list_concat_trace,
    loads_spec,
    make_spec,
    random_message,
    window_sweep,
)
from insdel.rs import RSCodeSpec, rs_encode


@pytest.fixture(scope="module")
def gf8_spec():
    inner = search_kary(4, 64, Fraction(1, 2), max_size=64)
    return make_spec(8, 2, inner, Fraction(3, 4), Fraction(1, 8))


def test_encode_length_and_blocks(gf8_spec):
    spec = gf8_spec
    msg = (3, 5)
    c = concat_encode(spec, msg)
    assert len(c) == spec.n * spec.m
    values = rs_encode(spec.outer, msg)
    for i in range(spec.n):
        block = c.symbols[i * spec.m:(i + 1) * spec.m]
        assert spec.inner.index_of(block) == spec.index(i, values[i])


def test_one_coefficient_changes_many_blocks(gf8_spec):
    spec = gf8_spec
    for a, b in itertools.product(range(8), repeat=2):
        if (a, b) == (1, 2):
            continue
        ca = concat_encode(spec, (1, 2)).symbols
        cb = concat_encode(spec, (a, b)).symbols
        differ = sum(ca[i * spec.m:(i + 1) * spec.m] != cb[i * spec.m:(i + 1) * spec.m] for i in range(spec.n))
        assert differ >= spec.n - spec.outer.d + 1


def test_sweep_clean_codeword(desk_concat):
    spec = desk_concat
    msg = random_message(spec, np.random.default_rng(0))
    J = window_sweep(spec, concat_encode(spec, msg))
    truth = {(i, v) for i, v in enumerate(rs_encode(spec.outer, msg))}
    assert truth <= J


def test_sweep_empty(desk_concat):
    assert window_sweep(desk_concat, ()) == set()


def test_sweep_single_codeword_window(desk_concat):
    spec = desk_concat
    word = spec.inner.codewords[spec.index(5, 17)]
    assert (5, 17) in window_sweep(spec, word)


def test_pruned_sweep_matches_dense(desk_concat):
    spec = desk_concat
    rng = np.random.default_rng(1)
    msg = random_message(spec, rng)
    c = concat_encode(spec, msg)
    for strategy in ("uniform", "block_shift"):
        s, _ = corrupt(c, spec.budget, strategy, 3, layout=spec.layout())
        assert window_sweep(spec, s, dense=True) == window_sweep(spec, s, dense=False)


def test_clean_round_trip(desk_concat):
    spec = desk_concat
    msg = random_message(spec, np.random.default_rng(2))
    assert list_concat_decode(spec, concat_encode(spec, msg)) == msg


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_budget_round_trip(desk_concat, strategy):
    spec = desk_concat
    rng = np.random.default_rng(STRATEGIES.index(strategy))
    msg = random_message(spec, rng)
    c = concat_encode(spec, msg)
    s, _ = corrupt(c, spec.budget, strategy, 7, layout=spec.layout())
    trace = list_concat_trace(spec, s)
    assert trace.message == msg
    assert coverage_census(spec, c, s, msg, trace.candidates).violations(spec) == []


def test_far_above_radius_may_fail(desk_concat):
    spec = desk_concat
    c = concat_encode(spec, random_message(spec, np.random.default_rng(3)))
    s, _ = corrupt(c, spec.length, "uniform", 0)
    try:
        list_concat_decode(spec, s)
    except (DecodeFailure, ContractViolation, ParameterError):
        pass


def test_threshold_check_raises(gf8_spec):
    # q = 8 cannot satisfy A^2 > 2 d |J| once a clean codeword fills J
    spec = gf8_spec
    with pytest.raises(ParameterError):
        list_concat_decode(spec, concat_encode(spec, (1, 1)))


def test_spec_validation(gf8_spec):
    with pytest.raises(InvalidInputError):
        ConcatCodeSpec(RSCodeSpec(gf(8), 2, 7), gf8_spec.inner, Fraction(3, 4), Fraction(1, 8))
    with pytest.raises(InvalidInputError):
        make_spec(8, 2, gf8_spec.inner.truncated(10), Fraction(3, 4), Fraction(1, 8))
    with pytest.raises(InvalidInputError):
        make_spec(8, 2, gf8_spec.inner, 0, Fraction(1, 8))  # radius too small


def test_spec_counts(desk_concat):
    spec = desk_concat
    assert spec.length == 640
    assert spec.budget == 128
    assert spec.threshold == 20
    assert spec.step == 3
    assert spec.candidate_bound == 214 * 7


def test_spec_file_round_trip(desk_concat):
    back = loads_spec(dumps_spec(desk_concat), desk_concat.inner)
    assert back == desk_concat
