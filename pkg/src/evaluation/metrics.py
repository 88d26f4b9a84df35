"""
Step Metrics Module
State-EM and Step-EM for one queried step
"""

from dataclasses import dataclass
from typing import Sequence

from ..prompting.renderer import AnswerAtom
from .answer_parsing import PredictionMap


@dataclass(frozen=True)
class StepScore:
    matched: int
    queried: int
    predicted: int
    state_em: float
    step_em: int

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "queried": self.queried,
            "predicted": self.predicted,
            "state_em": self.state_em,
            "step_em": self.step_em,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "StepScore":
        return cls(
            matched=int(data["matched"]),
            queried=int(data["queried"]),
            predicted=int(data["predicted"]),
            state_em=float(data["state_em"]),
            step_em=int(data["step_em"]),
        )


def score_step(pred: PredictionMap, expected: Sequence[AnswerAtom]) -> StepScore:
    """
    Score a parsed prediction against the rendered expectation

    Matching happens on rendered truth tokens, so counterintuitive variants
    need no special handling.

    Args:
        pred: Parsed prediction for the step
        expected: Expected atoms (render-space) for every queried state

    Returns:
        StepScore; step_em is 1 only for a complete, exact, clean enumeration
    """
    queried = len(expected)
    matched = sum(1 for atom in expected if pred.by_state.get(atom.state_id) == atom.truth)
    predicted = pred.predicted_count

    exact = matched == queried == predicted and not pred.anomalies.unknown_atoms
    return StepScore(
        matched=matched,
        queried=queried,
        predicted=predicted,
        state_em=matched / queried if queried else 0.0,
        step_em=1 if exact else 0,
    )
