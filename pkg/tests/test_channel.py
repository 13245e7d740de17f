import numpy as np
import pytest

from insdel.channel import STRATEGIES, CorruptionPlan, Layout, apply_edits, corrupt, verify_budget
from insdel.errors import InvalidInputError
from insdel.highrate import find_buffers, hr_encode, random_message
from insdel.seqkit import insdel_distance

LAYOUT = Layout(blocks=[(0, 8), (12, 20)], chunks=[(8, 12)], k=2, buffer_len=4)
WORD = (1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1, 1, 1)


def test_zero_budget_is_identity():
    for strategy in STRATEGIES:
        s, plan = corrupt(WORD, 0, strategy, 3, layout=LAYOUT)
        assert s.symbols == WORD and plan.edits == []


@pytest.mark.parametrize("budget", [1, 3, 7])
def test_uniform_length_window(budget):
    s, _ = corrupt(WORD, budget, "uniform", budget)
    assert len(WORD) - budget <= len(s) <= len(WORD) + budget


@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize("seed", range(5))
def test_every_strategy_respects_budget(strategy, seed):
    s, plan = corrupt(WORD, 5, strategy, seed, layout=LAYOUT)
    assert len(plan.edits) <= 5
    assert verify_budget(WORD, s, 5)
    assert plan.apply(WORD) == s.symbols


def test_same_seed_same_output():
    a = corrupt(WORD, 4, "block_shift", 9, layout=LAYOUT)
    b = corrupt(WORD, 4, "block_shift", 9, layout=LAYOUT)
    assert a == b


def test_layout_required():
    with pytest.raises(InvalidInputError):
        corrupt(WORD, 2, "chunk_kill", 0)
    with pytest.raises(InvalidInputError):
        corrupt(WORD, -1, "uniform", 0)
    with pytest.raises(InvalidInputError):
        corrupt(WORD, 1, "sideways", 0)


def test_verify_budget_examples():
    assert verify_budget(WORD, WORD, 0)
    assert not verify_budget("00", "11", 1)
    assert insdel_distance("00", "11") == 4


def test_plan_round_trip():
    s, plan = corrupt(WORD, 6, "uniform", 2)
    back = CorruptionPlan.loads(plan.dumps())
    assert back == plan
    assert back.apply(WORD) == s.symbols


def test_plan_rejects_garbage():
    with pytest.raises(InvalidInputError):
        CorruptionPlan.loads("X 3\n")
    with pytest.raises(InvalidInputError):
        apply_edits("01", [("D", 5)])


def test_buffer_spoof_adds_detection(small_highrate):
    spec = small_highrate
    c = hr_encode(spec, random_message(spec, np.random.default_rng(0)))
    before = len(find_buffers(c, spec.buffer_len, spec.theta_buf).spans)
    s, _ = corrupt(c, spec.buffer_len, "buffer_spoof", 1, layout=spec.layout())
    after = len(find_buffers(s, spec.buffer_len, spec.theta_buf).spans)
    assert after >= before + 1


def test_greedy_uses_probe():
    calls = []

    def probe(s):
        calls.append(s)
        return float(sum(s))

    corrupt(WORD, 4, "greedy", 0, layout=LAYOUT, probe=probe)
    assert calls
