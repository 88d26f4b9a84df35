"""
Instance Generation Module
Seeded, reproducible generation of lexicons, step sequences, distractors and test instances
"""

import hashlib
import logging
import re
import string
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import ConfigError, CountTooLarge, EmptyPool, GeneratorExhausted
from .distractor_pool import DEFAULT_SENTENCES
from .state_machine import MAX_ENTITIES, EnvConfig, GroundState, StateId, StateKind, StepAction, replay

logger = logging.getLogger(__name__)

TOKEN_ALPHABET = string.ascii_letters + string.digits
MAX_TOKEN_LENGTH = 10
MAX_RESAMPLES = 1000
SUPPORTED_SHOTS = (2, 3, 5)
TRUTH_LITERALS = frozenset({"true", "false"})

_TOKEN_RE = re.compile(r"[A-Za-z0-9]{1,10}")


class TokenMode(str, Enum):
    NATURAL = "nl"
    SYNTHETIC = "sl"


@dataclass(frozen=True)
class LexiconMode:
    """Natural or synthetic tokens, chosen separately for functors and arguments"""
    functor_mode: TokenMode = TokenMode.NATURAL
    argument_mode: TokenMode = TokenMode.NATURAL

    def __post_init__(self):
        object.__setattr__(self, "functor_mode", TokenMode(self.functor_mode))
        object.__setattr__(self, "argument_mode", TokenMode(self.argument_mode))

    @property
    def key(self) -> str:
        return f"{self.functor_mode.value}+{self.argument_mode.value}"

    @property
    def label(self) -> str:
        return f"{self.functor_mode.value.upper()} Functor + {self.argument_mode.value.upper()} Argument"

    @property
    def is_synthetic(self) -> bool:
        return TokenMode.SYNTHETIC in (self.functor_mode, self.argument_mode)

    @classmethod
    def from_key(cls, key: str) -> "LexiconMode":
        try:
            functor, argument = key.strip().lower().split("+")
            return cls(TokenMode(functor), TokenMode(argument))
        except ValueError as e:
            raise ConfigError(f"Unknown lexicon mode '{key}', expected e.g. 'nl+sl'") from e


NATURAL_TOKENS = {
    "opened_functor": "OPENED",
    "obtained_functor": "OBTAINED",
    "box_prefix": "BOX",
    "key_prefix": "KEY",
}


@dataclass(frozen=True)
class Lexicon:
    opened_functor: str
    obtained_functor: str
    box_prefix: str
    key_prefix: str
    mode: LexiconMode

    def functor_for(self, kind: StateKind) -> str:
        return self.opened_functor if kind is StateKind.BOX else self.obtained_functor

    def prefix_for(self, kind: StateKind) -> str:
        return self.box_prefix if kind is StateKind.BOX else self.key_prefix

    def argument(self, state_id: StateId) -> str:
        return f"{self.prefix_for(state_id.kind)}-{state_id.index}"

    def to_dict(self) -> dict:
        return {
            "opened_functor": self.opened_functor,
            "obtained_functor": self.obtained_functor,
            "box_prefix": self.box_prefix,
            "key_prefix": self.key_prefix,
            "mode": self.mode.key,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Lexicon":
        return cls(
            opened_functor=data["opened_functor"],
            obtained_functor=data["obtained_functor"],
            box_prefix=data["box_prefix"],
            key_prefix=data["key_prefix"],
            mode=LexiconMode.from_key(data["mode"]),
        )


class InstructionVariant(str, Enum):
    NORMAL = "normal"
    COUNTER_OUTPUT_FORMAT = "counter_output_format"
    COUNTER_LANGUAGE_INSTRUCTION = "counter_language_instruction"

    @property
    def flips_truth(self) -> bool:
        return self is not InstructionVariant.NORMAL


@dataclass(frozen=True)
class GenerationSettings:
    env: EnvConfig = EnvConfig()
    mode: LexiconMode = LexiconMode()
    variant: InstructionVariant = InstructionVariant.NORMAL
    n_shots: int = 2
    distractors_on: bool = False

    @property
    def tag(self) -> str:
        tag = f"{self.mode.key}-{self.variant.value}-{self.n_shots}shot"
        return tag + "-distract" if self.distractors_on else tag


@dataclass(frozen=True)
class Instance:
    """A fully resolved test case; regenerable from (seed, settings)"""
    id: str
    seed: int
    env: EnvConfig
    lexicon: Lexicon
    variant: InstructionVariant
    steps: Tuple[StepAction, ...]
    n_shots: int
    distractors: Optional[Tuple[str, ...]] = None

    @property
    def num_steps(self) -> int:
        return len(self.steps)

    def state_after(self, step_count: int) -> GroundState:
        return replay(self.env, self.steps[:step_count])

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "seed": self.seed,
            "env": self.env.to_dict(),
            "lexicon": self.lexicon.to_dict(),
            "variant": self.variant.value,
            "n_shots": self.n_shots,
            "steps": [step.to_dict() for step in self.steps],
            "distractors": list(self.distractors) if self.distractors is not None else None,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Instance":
        distractors = record.get("distractors")
        return cls(
            id=record["id"],
            seed=int(record["seed"]),
            env=EnvConfig.from_dict(record["env"]),
            lexicon=Lexicon.from_dict(record["lexicon"]),
            variant=InstructionVariant(record["variant"]),
            steps=tuple(StepAction.from_dict(s) for s in record["steps"]),
            n_shots=int(record["n_shots"]),
            distractors=tuple(distractors) if distractors is not None else None,
        )


def derive_seed(base_seed: int, cell_key: str, sample_index: int) -> int:
    """64-bit instance seed from (base seed, cell, sample index)"""
    digest = hashlib.sha256(f"{base_seed}|{cell_key}|{sample_index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def max_steps(env: EnvConfig) -> int:
    return min(MAX_ENTITIES, env.num_boxes, env.num_keys)


def gen_token(rng: np.random.Generator) -> str:
    """Random alphanumeric token, length uniform on [1, 10]"""
    length = int(rng.integers(1, MAX_TOKEN_LENGTH + 1))
    picks = rng.integers(0, len(TOKEN_ALPHABET), size=length)
    return "".join(TOKEN_ALPHABET[i] for i in picks)


def is_valid_token(token: str) -> bool:
    return bool(_TOKEN_RE.fullmatch(token)) and token.lower() not in TRUTH_LITERALS


def gen_lexicon(rng: np.random.Generator, mode: LexiconMode) -> Lexicon:
    """
    Build the four surface lexemes for one instance

    Args:
        rng: Seeded generator
        mode: Natural or synthetic for functors and arguments

    Returns:
        Lexicon with pairwise distinct, parseable tokens

    Raises:
        GeneratorExhausted: After MAX_RESAMPLES rejected draws
    """
    slot_modes = {
        "opened_functor": mode.functor_mode,
        "obtained_functor": mode.functor_mode,
        "box_prefix": mode.argument_mode,
        "key_prefix": mode.argument_mode,
    }
    # natural tokens are placed first so synthetic draws are checked against them
    tokens = {slot: NATURAL_TOKENS[slot] for slot, m in slot_modes.items() if m is TokenMode.NATURAL}

    failures = 0
    for slot, slot_mode in slot_modes.items():
        if slot_mode is TokenMode.NATURAL:
            continue
        while True:
            candidate = gen_token(rng)
            if is_valid_token(candidate) and candidate not in tokens.values():
                tokens[slot] = candidate
                break
            failures += 1
            if failures >= MAX_RESAMPLES:
                raise GeneratorExhausted(f"Could not draw a distinct token for {slot}")

    return Lexicon(mode=mode, **tokens)


def gen_steps(rng: np.random.Generator, env: EnvConfig, count: int) -> Tuple[StepAction, ...]:
    """
    Sample step actions without replacement

    Args:
        rng: Seeded generator
        env: Environment size
        count: Number of steps

    Returns:
        Tuple of StepAction; boxes and keys sampled independently

    Raises:
        CountTooLarge: If count exceeds the number of boxes or keys
    """
    if count > min(env.num_boxes, env.num_keys):
        raise CountTooLarge(f"{count} steps requested for {env.num_boxes} boxes and {env.num_keys} keys")
    if count < 0:
        raise CountTooLarge(f"Negative step count {count}")

    boxes = rng.choice(env.num_boxes, size=count, replace=False)
    keys = rng.choice(env.num_keys, size=count, replace=False)
    return tuple(StepAction(box=int(b), key=int(k)) for b, k in zip(boxes, keys))


def gen_distractor(rng: np.random.Generator, pool: Sequence[str]) -> str:
    """Uniform draw from the sentence pool"""
    if not pool:
        raise EmptyPool("Distractor pool is empty")
    return pool[int(rng.integers(0, len(pool)))]


def gen_instance(seed: int, settings: GenerationSettings, pool: Optional[Sequence[str]] = None) -> Instance:
    """
    Generate one instance deterministically from (seed, settings)

    Each concern draws from its own child stream, so step sequences and ground
    truth depend only on seed, environment and shot count.

    Args:
        seed: 64-bit seed
        settings: Environment, lexicon mode, variant, shot count, distractor flag
        pool: Distractor sentences (default: bundled pool)

    Returns:
        Instance
    """
    if settings.n_shots not in SUPPORTED_SHOTS:
        raise ConfigError(f"n_shots must be one of {SUPPORTED_SHOTS}, got {settings.n_shots}")
    step_budget = max_steps(settings.env)
    if settings.n_shots + 1 > step_budget:
        raise ConfigError(f"{settings.n_shots}-shot needs at least {settings.n_shots + 1} steps, "
                          f"environment allows {step_budget}")
    if not 0 <= seed < 2 ** 64:
        raise ConfigError(f"Seed must fit in 64 bits, got {seed}")

    lexicon_seq, length_seq, steps_seq, distractor_seq = np.random.SeedSequence(seed).spawn(4)

    lexicon = gen_lexicon(np.random.default_rng(lexicon_seq), settings.mode)
    extra = int(np.random.default_rng(length_seq).integers(1, step_budget - settings.n_shots + 1))
    steps = gen_steps(np.random.default_rng(steps_seq), settings.env, settings.n_shots + extra)

    distractors = None
    if settings.distractors_on:
        sentence_pool = pool if pool is not None else DEFAULT_SENTENCES
        distractor_rng = np.random.default_rng(distractor_seq)
        distractors = tuple(gen_distractor(distractor_rng, sentence_pool) for _ in steps)

    return Instance(
        id=f"{settings.tag}-{seed:016x}",
        seed=seed,
        env=settings.env,
        lexicon=lexicon,
        variant=settings.variant,
        steps=steps,
        n_shots=settings.n_shots,
        distractors=distractors,
    )
