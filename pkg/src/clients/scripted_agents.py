"""
Scripted Agents
Deterministic reference agents behind the same interface as the HTTP client
"""

import hashlib
import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..evaluation.answer_parsing import extract_states
from ..exceptions import ConfigError, NoPreviousAnswer
from ..prompting.messages import MessageList
from ..prompting.renderer import ANSWER_PREFIX, QUESTION_PREFIX

_QUERY_ATOM_RE = re.compile(r"([a-zA-Z0-9]+)\(([a-zA-Z0-9]+-\d)\)=\?")
_ANSWER_LINE_RE = re.compile(r"^" + re.escape(ANSWER_PREFIX) + r"(.*)$", re.MULTILINE)


class AgentKind(str, Enum):
    ORACLE = "oracle"
    COPY_LAST = "copylast"
    RANDOM = "random"
    FORGETFUL = "forgetful"


@dataclass(frozen=True)
class ScriptedAgentKind:
    kind: AgentKind
    p: float = 0.1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", AgentKind(self.kind))
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"Forgetting probability must be in [0, 1], got {self.p}")
        if self.seed < 0:
            raise ConfigError(f"Agent seed must be >= 0, got {self.seed}")

    @property
    def label(self) -> str:
        if self.kind is AgentKind.RANDOM:
            return f"random(seed={self.seed})"
        if self.kind is AgentKind.FORGETFUL:
            return f"forgetful(p={self.p},seed={self.seed})"
        return self.kind.value


@dataclass(frozen=True)
class OracleView:
    """What the probe layer reveals to scripted agents"""
    expected_answer: str
    previous_answer: Optional[str] = None


def _message_rng(seed: int, messages: MessageList) -> np.random.Generator:
    digest = hashlib.sha256()
    for message in messages:
        digest.update(message.role.value.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(message.content.encode("utf-8"))
        digest.update(b"\x00")
    return np.random.default_rng([seed, int.from_bytes(digest.digest()[:8], "big")])


def _flip(token: str) -> str:
    return "False" if token.lower() == "true" else "True"


def _copy_last(messages: MessageList) -> str:
    matches = _ANSWER_LINE_RE.findall("\n".join(m.content for m in messages))
    if not matches:
        raise NoPreviousAnswer("Prompt contains no answer block")
    return matches[-1]


def _random_truth(messages: MessageList, seed: int) -> str:
    text = "\n".join(m.content for m in messages)
    question = text[text.rfind(QUESTION_PREFIX):] if QUESTION_PREFIX in text else ""
    atoms = _QUERY_ATOM_RE.findall(question)
    rng = _message_rng(seed, messages)
    tokens = rng.integers(0, 2, size=len(atoms))
    return ANSWER_PREFIX + ", ".join(
        f"{functor}({argument})={'True' if bit else 'False'}"
        for (functor, argument), bit in zip(atoms, tokens)
    )


def _forgetful(messages: MessageList, view: OracleView, p: float, seed: int) -> str:
    expected = extract_states(view.expected_answer)
    previous = {atom.key: atom.truth_token for atom in extract_states(view.previous_answer)}
    rng = _message_rng(seed, messages)
    draws = rng.random(len(expected))

    rendered = []
    for atom, draw in zip(expected, draws):
        token = atom.truth_token
        # untouched states keep their token from the previous step
        if previous.get(atom.key) == token and draw < p:
            token = _flip(token)
        rendered.append(f"{atom.functor}({atom.argument})={token}")
    return ANSWER_PREFIX + ", ".join(rendered)


def scripted_complete(kind: ScriptedAgentKind, messages: MessageList, oracle_view: Optional[OracleView]) -> str:
    """
    Produce a scripted response

    Args:
        kind: Agent kind and parameters
        messages: The prompt as sent
        oracle_view: Expected answer and previous expected answer for this query

    Returns:
        Raw response text

    Raises:
        NoPreviousAnswer: CopyLast with no answer block in the prompt
        ValueError: Oracle or Forgetful without an oracle view
    """
    if kind.kind is AgentKind.COPY_LAST:
        return _copy_last(messages)
    if kind.kind is AgentKind.RANDOM:
        return _random_truth(messages, kind.seed)

    if oracle_view is None:
        raise ValueError(f"{kind.label} needs an oracle view")
    if kind.kind is AgentKind.ORACLE:
        return oracle_view.expected_answer
    return _forgetful(messages, oracle_view, kind.p, kind.seed)


class ScriptedAgent:
    """Scripted agent with the complete(messages, oracle_view) interface"""

    def __init__(self, kind: ScriptedAgentKind):
        self.kind = kind
        self.name = kind.label

    def complete(self, messages: MessageList, oracle_view: Optional[OracleView] = None) -> str:
        return scripted_complete(self.kind, messages, oracle_view)

    def close(self):
        pass
