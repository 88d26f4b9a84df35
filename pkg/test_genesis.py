"""
Instance Generation Tests
Determinism, token validity, step sampling and distractors
"""

from collections import Counter

import numpy as np
import pytest
from scipy import stats

from src.environment import (
    DEFAULT_SENTENCES,
    EnvConfig,
    GenerationSettings,
    Instance,
    InstructionVariant,
    LexiconMode,
    derive_seed,
    gen_distractor,
    gen_instance,
    gen_lexicon,
    gen_steps,
    load_sentence_pool,
    replay,
)
from src.environment.genesis import NATURAL_TOKENS, is_valid_token, max_steps
from src.exceptions import ConfigError, CountTooLarge, EmptyPool, GeneratorExhausted

MODES = ["nl+nl", "sl+nl", "nl+sl", "sl+sl"]


class StuckRng:
    """Always draws the same one-letter token"""

    def integers(self, low, high=None, size=None):
        return 1 if size is None else np.zeros(size, dtype=int)


def test_same_seed_same_instance(make_instance):
    """Test: generation is a pure function of (seed, settings)"""
    assert make_instance(42, "sl+sl") == make_instance(42, "sl+sl")
    assert make_instance(42, "sl+sl") != make_instance(43, "sl+sl")


@pytest.mark.parametrize("mode", MODES)
def test_lexicon_tokens_valid_and_distinct(mode):
    """Test: lexemes are alphanumeric, short, distinct and never truth literals"""
    lexicon_mode = LexiconMode.from_key(mode)
    for seed in range(200):
        lexicon = gen_lexicon(np.random.default_rng(seed), lexicon_mode)
        tokens = [lexicon.opened_functor, lexicon.obtained_functor, lexicon.box_prefix, lexicon.key_prefix]
        assert len(set(tokens)) == 4
        assert all(is_valid_token(t) for t in tokens)
        assert all(t.lower() not in ("true", "false") for t in tokens)


def test_natural_lexicon_uses_fixed_words():
    """Test: natural positions use OPENED/OBTAINED/BOX/KEY"""
    lexicon = gen_lexicon(np.random.default_rng(0), LexiconMode.from_key("nl+sl"))
    assert lexicon.opened_functor == NATURAL_TOKENS["opened_functor"]
    assert lexicon.obtained_functor == NATURAL_TOKENS["obtained_functor"]
    assert lexicon.box_prefix not in ("BOX", "KEY")


def test_lexicon_generator_exhausts():
    """Test: a generator that keeps colliding gives up"""
    with pytest.raises(GeneratorExhausted):
        gen_lexicon(StuckRng(), LexiconMode.from_key("sl+nl"))


def test_unknown_lexicon_mode():
    """Test: malformed mode keys are configuration errors"""
    with pytest.raises(ConfigError):
        LexiconMode.from_key("nl")
    with pytest.raises(ConfigError):
        LexiconMode.from_key("xx+nl")


def test_gen_steps_distinct_targets(env10):
    """Test: boxes and keys are sampled without replacement"""
    steps = gen_steps(np.random.default_rng(3), env10, 10)
    assert sorted(s.box for s in steps) == list(range(10))
    assert sorted(s.key for s in steps) == list(range(10))


def test_gen_steps_count_too_large():
    """Test: more steps than boxes"""
    with pytest.raises(CountTooLarge):
        gen_steps(np.random.default_rng(0), EnvConfig(3, 5), 4)


@pytest.mark.parametrize("n_shots", [2, 3, 5])
def test_step_count_range(make_instance, n_shots):
    """Test: n_shots + 1 <= steps <= 10 and every instance replays cleanly"""
    for seed in range(100):
        instance = make_instance(seed, n_shots=n_shots)
        assert n_shots + 1 <= instance.num_steps <= 10
        replay(instance.env, instance.steps)


def test_extra_steps_uniform(make_instance):
    """Test: extra steps are uniform on 1..(10 - n_shots)"""
    counts = Counter(make_instance(seed, n_shots=2).num_steps - 2 for seed in range(800))
    observed = [counts[e] for e in range(1, 9)]
    assert sum(observed) == 800
    assert stats.chisquare(observed).pvalue > 1e-4


def test_small_environment_step_budget():
    """Test: the step budget shrinks with the environment"""
    env = EnvConfig(4, 4)
    assert max_steps(env) == 4
    settings = GenerationSettings(env=env, n_shots=2)
    for seed in range(50):
        assert 3 <= gen_instance(seed, settings).num_steps <= 4

    with pytest.raises(ConfigError):
        gen_instance(0, GenerationSettings(env=EnvConfig(3, 3), n_shots=3))


def test_unsupported_shot_count():
    """Test: only 2, 3 and 5 shots"""
    with pytest.raises(ConfigError):
        gen_instance(0, GenerationSettings(n_shots=4))


def test_ground_truth_shared_across_variants_and_modes(make_instance):
    """Test: a seed fixes steps regardless of variant and lexicon mode"""
    for seed in range(20):
        base = make_instance(seed)
        for mode in MODES:
            for variant in InstructionVariant:
                other = make_instance(seed, mode, variant.value)
                assert other.steps == base.steps


def test_distractors_one_per_step(make_instance):
    """Test: distractor cells carry one pool sentence per step"""
    instance = make_instance(5, distractors=True)
    assert len(instance.distractors) == instance.num_steps
    assert all(sentence in DEFAULT_SENTENCES for sentence in instance.distractors)
    assert make_instance(5).distractors is None
    assert make_instance(5).steps == instance.steps


def test_default_pool_size():
    """Test: the bundled pool holds at least 100 sentences"""
    assert len(DEFAULT_SENTENCES) >= 100
    assert all("(" not in s and "Answer:" not in s for s in DEFAULT_SENTENCES)


def test_empty_pool():
    """Test: drawing from an empty pool"""
    with pytest.raises(EmptyPool):
        gen_distractor(np.random.default_rng(0), [])


def test_load_sentence_pool(tmp_path):
    """Test: sentence files skip blank lines; empty files are rejected"""
    path = tmp_path / "pool.txt"
    path.write_text("First sentence.\n\nSecond sentence.\n", encoding="utf-8")
    assert load_sentence_pool(path) == ("First sentence.", "Second sentence.")

    empty = tmp_path / "empty.txt"
    empty.write_text("\n\n", encoding="utf-8")
    with pytest.raises(EmptyPool):
        load_sentence_pool(empty)


def test_derive_seed_stable():
    """Test: seeds depend on every input and fit in 64 bits"""
    seed = derive_seed(0, "cell", 1)
    assert seed == derive_seed(0, "cell", 1)
    assert 0 <= seed < 2 ** 64
    assert len({derive_seed(0, "cell", i) for i in range(100)}) == 100
    assert derive_seed(1, "cell", 1) != seed


def test_instance_record_round_trip(make_instance):
    """Test: instance records read back field for field"""
    instance = make_instance(11, "sl+sl", "counter_output_format", 3, distractors=True)
    assert Instance.from_record(instance.to_record()) == instance
    assert instance.id.startswith("sl+sl-counter_output_format-3shot-distract-")
