"""
Environment State Machine Tests
Ground-truth transitions, enumeration order and config validation
"""

import itertools

import numpy as np
import pytest

from src.environment import (
    EnvConfig,
    GroundState,
    QueryOrdering,
    StateId,
    StateKind,
    StepAction,
    apply_step,
    changed_states,
    enumerate_states,
    initial_state,
    query_order,
    replay,
)
from src.environment.state_machine import true_count
from src.exceptions import ConfigError, OutOfRange, RepeatedTarget

BOX = StateKind.BOX
KEY = StateKind.KEY


def test_initial_state_all_false():
    """Test: Step-0 has nothing opened and nothing obtained"""
    for boxes, keys in [(10, 10), (2, 2), (5, 5)]:
        state = initial_state(EnvConfig(boxes, keys))
        assert state.opened == (False,) * boxes
        assert state.obtained == (False,) * keys


def test_apply_step_sets_exactly_two_flags(env10):
    """Test: opening box 3 and retrieving key 2"""
    start = initial_state(env10)
    state = apply_step(start, StepAction(box=3, key=2))

    assert [i for i, v in enumerate(state.opened) if v] == [3]
    assert [i for i, v in enumerate(state.obtained) if v] == [2]
    assert start == initial_state(env10)


def test_apply_step_rejects_repeated_target(env10):
    """Test: a box cannot be opened twice"""
    state = apply_step(initial_state(env10), StepAction(box=3, key=2))
    with pytest.raises(RepeatedTarget):
        apply_step(state, StepAction(box=3, key=0))
    with pytest.raises(RepeatedTarget):
        apply_step(state, StepAction(box=0, key=2))


def test_apply_step_rejects_out_of_range():
    """Test: indices beyond the environment"""
    state = initial_state(EnvConfig(3, 3))
    with pytest.raises(OutOfRange):
        apply_step(state, StepAction(box=3, key=0))
    with pytest.raises(OutOfRange):
        apply_step(state, StepAction(box=0, key=-1))


def test_replay_matches_set_simulation(env10):
    """Test: five distinct actions agree with a set-based simulation"""
    rng = np.random.default_rng(7)
    for _ in range(50):
        boxes = rng.choice(10, size=5, replace=False)
        keys = rng.choice(10, size=5, replace=False)
        actions = [StepAction(int(b), int(k)) for b, k in zip(boxes, keys)]

        state = replay(env10, actions)
        opened, obtained = set(), set()
        for action in actions:
            opened.add(action.box)
            obtained.add(action.key)

        assert {i for i, v in enumerate(state.opened) if v} == opened
        assert {i for i, v in enumerate(state.obtained) if v} == obtained
        assert (sum(state.opened), sum(state.obtained)) == (5, 5)


def test_replay_is_order_independent():
    """Test: any permutation of a valid sequence ends in the same state"""
    env = EnvConfig(4, 4)
    actions = [StepAction(0, 3), StepAction(2, 1), StepAction(3, 0)]
    finals = {replay(env, perm) for perm in itertools.permutations(actions)}
    assert len(finals) == 1


def test_true_count_after_steps(env10):
    """Test: after t steps exactly 2t states are true"""
    actions = [StepAction(i, 9 - i) for i in range(6)]
    state = initial_state(env10)
    for t, action in enumerate(actions, start=1):
        state = apply_step(state, action)
        assert true_count(state) == 2 * t
        assert sum(v for _, v in enumerate_states(state, env10)) == 2 * t


def test_enumerate_interleaved_small():
    """Test: interleaved ordering on a 2x2 environment"""
    env = EnvConfig(2, 2)
    state = GroundState(opened=(True, False), obtained=(False, False))

    assert enumerate_states(state, env) == [
        (StateId(BOX, 0), True),
        (StateId(KEY, 0), False),
        (StateId(BOX, 1), False),
        (StateId(KEY, 1), False),
    ]


def test_orderings_are_permutations(env10):
    """Test: both orderings enumerate the same multiset"""
    state = replay(env10, [StepAction(1, 4), StepAction(7, 0)])
    boxes_first = EnvConfig(10, 10, QueryOrdering.BOXES_THEN_KEYS)

    interleaved = enumerate_states(state, env10)
    grouped = enumerate_states(state, boxes_first)
    assert len(interleaved) == len(grouped) == 20
    assert sorted(interleaved) == sorted(grouped)
    assert [s.kind for s, _ in grouped] == [BOX] * 10 + [KEY] * 10


def test_interleaved_uneven_sizes():
    """Test: leftover states of the larger side are appended"""
    order = query_order(EnvConfig(3, 1))
    assert order == [StateId(BOX, 0), StateId(KEY, 0), StateId(BOX, 1), StateId(BOX, 2)]


def test_changed_states():
    """Test: a step touches its box and its key"""
    assert changed_states(StepAction(3, 2)) == {StateId(BOX, 3), StateId(KEY, 2)}


@pytest.mark.parametrize("boxes,keys", [(0, 10), (10, 0), (11, 10), (10, 11)])
def test_env_config_bounds(boxes, keys):
    """Test: sizes outside [1, 10] are rejected"""
    with pytest.raises(ConfigError):
        EnvConfig(boxes, keys)


def test_env_config_round_trip():
    """Test: EnvConfig serializes to a plain dict and back"""
    env = EnvConfig(4, 6, QueryOrdering.BOXES_THEN_KEYS)
    assert EnvConfig.from_dict(env.to_dict()) == env
    assert env.total_states == 10
