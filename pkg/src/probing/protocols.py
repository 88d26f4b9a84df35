"""
Probing Protocols Module
Final-query testing, intermediate state probing and compressed initialization
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from ..clients.scripted_agents import OracleView
from ..environment.genesis import Instance, InstructionVariant, Lexicon
from ..environment.state_machine import (
    EnvConfig,
    GroundState,
    StepAction,
    changed_states,
    initial_state,
    query_order,
    replay,
)
from ..evaluation.aggregation import StepOutcome
from ..evaluation.answer_parsing import PredictionMap, parse_prediction
from ..evaluation.metrics import StepScore, score_step
from ..evaluation.transitions import TransitionRecord, classify_transitions
from ..exceptions import BadK, ClientAuthError, ClientFailure, MalformedResponse, NoPreviousAnswer
from ..prompting.messages import MessageList, RenderStyle, assemble, messages_from_dicts, messages_to_dicts
from ..prompting.renderer import AnswerAtom, compose_bundle, expected_atoms, render_answer

logger = logging.getLogger(__name__)


class Protocol(str, Enum):
    FINAL = "final"
    INTERMEDIATE = "intermediate"
    COMPRESSED = "compressed"


@dataclass(frozen=True)
class EpisodeView:
    """The step sequence a protocol prompts over; compressed views start from a later state"""
    env: EnvConfig
    lexicon: Lexicon
    variant: InstructionVariant
    start_state: GroundState
    steps: Tuple[StepAction, ...]
    distractors: Optional[Tuple[str, ...]] = None

    @property
    def num_steps(self) -> int:
        return len(self.steps)

    def state_at(self, step: int) -> GroundState:
        return replay(self.env, self.steps[:step], start=self.start_state)

    def expected_at(self, step: int) -> List[AnswerAtom]:
        return expected_atoms(self.state_at(step), self.env, self.lexicon, self.variant)

    def answer_at(self, step: int) -> str:
        return render_answer(self.state_at(step), self.env, self.lexicon, self.variant)

    def messages_for(self, query_step: int, demo_count: int, style: RenderStyle) -> MessageList:
        bundle = compose_bundle(self.env, self.lexicon, self.variant, self.steps, self.start_state,
                                demo_count, query_step, self.distractors)
        return assemble(bundle, style)


def episode_view(instance: Instance, k: int = 0) -> EpisodeView:
    """
    View of an instance with the first k steps folded into Step-0

    Args:
        instance: Source instance (never modified)
        k: Number of compressed steps, 0 for the plain episode

    Returns:
        EpisodeView whose steps are renumbered from 1
    """
    start = instance.state_after(k) if k else initial_state(instance.env)
    distractors = instance.distractors[k:] if instance.distractors is not None else None
    return EpisodeView(
        env=instance.env,
        lexicon=instance.lexicon,
        variant=instance.variant,
        start_state=start,
        steps=instance.steps[k:],
        distractors=distractors,
    )


@dataclass
class QueryRecord:
    step_index: int
    demo_count: int
    messages: MessageList
    expected_answer: str
    raw_response: Optional[str] = None
    error: Optional[str] = None
    raw_body: Optional[str] = None
    prediction: Optional[PredictionMap] = None
    score: Optional[StepScore] = None
    transitions: Optional[TransitionRecord] = None

    @property
    def answered(self) -> bool:
        return self.raw_response is not None

    def to_record(self) -> dict:
        return {
            "step_index": self.step_index,
            "demo_count": self.demo_count,
            "messages": messages_to_dicts(self.messages),
            "expected_answer": self.expected_answer,
            "raw_response": self.raw_response,
            "error": self.error,
            "raw_body": self.raw_body,
            "prediction": self.prediction.to_dict() if self.prediction is not None else None,
            "score": self.score.to_dict() if self.score is not None else None,
            "transitions": self.transitions.to_dict() if self.transitions is not None else None,
        }


@dataclass
class Trial:
    trial_id: str
    instance: Instance
    protocol: Protocol
    style: RenderStyle
    model_label: str
    k: Optional[int] = None
    per_step: bool = False
    queries: List[QueryRecord] = field(default_factory=list)

    @property
    def probes_each_step(self) -> bool:
        return self.protocol is Protocol.INTERMEDIATE or (self.protocol is Protocol.COMPRESSED and self.per_step)

    @property
    def issued(self) -> int:
        return len(self.queries)

    @property
    def answered(self) -> int:
        return sum(1 for q in self.queries if q.answered)

    @property
    def response_rate(self) -> float:
        return self.answered / self.issued if self.issued else 0.0

    @property
    def headline_score(self) -> Optional[StepScore]:
        """Score of the last query; None if it went unanswered"""
        return self.queries[-1].score if self.queries else None

    def view(self) -> EpisodeView:
        return episode_view(self.instance, self.k or 0)

    def outcomes(self) -> List[StepOutcome]:
        return [StepOutcome(q.step_index, q.score, q.transitions) for q in self.queries]

    def to_record(self) -> dict:
        return {
            "trial_id": self.trial_id,
            "instance": self.instance.to_record(),
            "protocol": self.protocol.value,
            "k": self.k,
            "per_step": self.per_step,
            "style": self.style.value,
            "model_label": self.model_label,
            "n_shots": self.instance.n_shots,
            "issued": self.issued,
            "answered": self.answered,
            "queries": [q.to_record() for q in self.queries],
        }

    @classmethod
    def from_record(cls, record: dict) -> "Trial":
        """
        Rebuild a trial from its transcript record

        Predictions, scores and transitions are recomputed from the raw
        responses, so stored numbers never need to be trusted.
        """
        trial = cls(
            trial_id=record["trial_id"],
            instance=Instance.from_record(record["instance"]),
            protocol=Protocol(record["protocol"]),
            style=RenderStyle(record["style"]),
            model_label=record["model_label"],
            k=record.get("k"),
            per_step=bool(record.get("per_step", False)),
            queries=[
                QueryRecord(
                    step_index=int(q["step_index"]),
                    demo_count=int(q["demo_count"]),
                    messages=messages_from_dicts(q["messages"]),
                    expected_answer=q["expected_answer"],
                    raw_response=q.get("raw_response"),
                    error=q.get("error"),
                    raw_body=q.get("raw_body"),
                )
                for q in record["queries"]
            ],
        )
        score_queries(trial.view(), trial.queries, trial.probes_each_step)
        return trial


def make_trial_id(instance: Instance, protocol: Protocol, style: RenderStyle, model_label: str,
                  k: Optional[int] = None, per_step: bool = False) -> str:
    parts = [instance.id, protocol.value]
    if protocol is Protocol.COMPRESSED:
        parts.append(f"k{k}" + ("-perstep" if per_step else ""))
    parts += [style.value, model_label]
    return ":".join(parts)


def score_queries(view: EpisodeView, queries: List[QueryRecord], probing: bool):
    """
    Fill predictions, scores and (when probing) transitions in place

    Args:
        view: Episode the queries were asked over
        queries: Queries in step order
        probing: Whether queries cover consecutive steps starting at 1
    """
    reference = query_order(view.env)
    previous_prediction = None
    for query in queries:
        step = query.step_index
        expected = view.expected_at(step)
        if query.answered:
            query.prediction = parse_prediction(query.raw_response, reference, view.lexicon)
            query.score = score_step(query.prediction, expected)

        if probing:
            if step - 1 <= query.demo_count:
                # previous step was shown as a demonstration
                previous = parse_prediction(view.answer_at(step - 1), reference, view.lexicon)
            else:
                previous = previous_prediction
            query.transitions = classify_transitions(previous, query.prediction, view.expected_at(step - 1),
                                                     expected, changed_states(view.steps[step - 1]))
        previous_prediction = query.prediction


def _ask(client, messages: MessageList, oracle_view: OracleView) -> Tuple[Optional[str], Optional[str], Optional[str]]:
    """Returns (raw_response, error, raw_body); authentication errors propagate"""
    try:
        return client.complete(messages, oracle_view=oracle_view), None, None
    except ClientAuthError:
        raise
    except MalformedResponse as e:
        logger.error(f"Malformed response: {e}")
        return None, str(e), e.raw_body
    except (ClientFailure, NoPreviousAnswer) as e:
        logger.error(f"Query failed: {e}")
        return None, str(e), None


def _run(instance: Instance, view: EpisodeView, client, style: RenderStyle, protocol: Protocol,
         plan: List[Tuple[int, int]], probing: bool, k: Optional[int] = None) -> Trial:
    trial = Trial(
        trial_id=make_trial_id(instance, protocol, style, client.name, k, probing and protocol is Protocol.COMPRESSED),
        instance=instance,
        protocol=protocol,
        style=style,
        model_label=client.name,
        k=k,
        per_step=probing and protocol is Protocol.COMPRESSED,
    )
    logger.debug(f"Starting trial {trial.trial_id} ({len(plan)} queries)")

    for query_step, demo_count in plan:
        messages = view.messages_for(query_step, demo_count, style)
        expected_answer = view.answer_at(query_step)
        oracle_view = OracleView(expected_answer, view.answer_at(query_step - 1))
        raw, error, raw_body = _ask(client, messages, oracle_view)
        trial.queries.append(QueryRecord(query_step, demo_count, messages, expected_answer,
                                         raw_response=raw, error=error, raw_body=raw_body))

    score_queries(view, trial.queries, probing)
    logger.debug(f"Finished trial {trial.trial_id}: {trial.answered}/{trial.issued} answered")
    return trial


def run_final_query(instance: Instance, client, style: RenderStyle = RenderStyle.TRADITIONAL) -> Trial:
    """
    One query at the last step after n_shots demonstrations

    Args:
        instance: Test instance
        client: Object with complete(messages, oracle_view) and name
        style: Message layout

    Returns:
        Trial with a single query
    """
    view = episode_view(instance)
    plan = [(view.num_steps, instance.n_shots)]
    return _run(instance, view, client, style, Protocol.FINAL, plan, probing=False)


def run_intermediate_probing(instance: Instance, client, style: RenderStyle = RenderStyle.TRADITIONAL) -> Trial:
    """
    Query every step s >= 1 with demonstrations only up to min(n_shots, s-1)

    Args:
        instance: Test instance
        client: Object with complete(messages, oracle_view) and name
        style: Message layout

    Returns:
        Trial with one query per step and transition records
    """
    view = episode_view(instance)
    plan = [(s, min(instance.n_shots, s - 1)) for s in range(1, view.num_steps + 1)]
    return _run(instance, view, client, style, Protocol.INTERMEDIATE, plan, probing=True)


def run_compressed_init(instance: Instance, k: int, client, style: RenderStyle = RenderStyle.TRADITIONAL,
                        per_step: bool = False) -> Trial:
    """
    Fold the first k steps into Step-0 and query the remaining ones

    Args:
        instance: Test instance
        k: Compressed steps, 1 <= k < len(steps)
        client: Object with complete(messages, oracle_view) and name
        style: Message layout
        per_step: Probe every remaining step instead of only the last

    Returns:
        Trial over the renumbered remaining steps

    Raises:
        BadK: If k is out of range
    """
    if not 1 <= k < instance.num_steps:
        raise BadK(f"k must be in [1, {instance.num_steps - 1}], got {k}")

    view = episode_view(instance, k)
    remaining = view.num_steps
    if per_step:
        plan = [(s, min(instance.n_shots, s - 1)) for s in range(1, remaining + 1)]
    else:
        plan = [(remaining, min(instance.n_shots, remaining - 1))]
    return _run(instance, view, client, style, Protocol.COMPRESSED, plan, probing=per_step, k=k)
