"""
Transition Analysis Module
Classifies how each state's prediction moves between consecutive queried steps
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Set

from ..environment.state_machine import StateId
from ..exceptions import MismatchedQuery
from ..prompting.renderer import AnswerAtom
from .answer_parsing import PredictionMap, state_id_from_str, state_id_to_str


class TransitionCategory(str, Enum):
    CU = "CU"            # changed state, updated correctly
    FU = "FU"            # changed state, update missed
    MC = "MC"            # untouched, correct before and after
    HU_IO = "HU_IO"      # untouched, correct -> incorrect
    DR = "DR"            # untouched, previous error kept
    HU_AC = "HU_AC"      # untouched, incorrect -> correct
    UNRESOLVED = "UNRESOLVED"


INCORRECT_OUTCOME = (TransitionCategory.FU, TransitionCategory.HU_IO, TransitionCategory.DR)
CORRECT_OUTCOME = (TransitionCategory.CU, TransitionCategory.MC, TransitionCategory.HU_AC)


@dataclass
class TransitionRecord:
    categories: Dict[StateId, TransitionCategory]

    @property
    def counts(self) -> Dict[TransitionCategory, int]:
        counts = {category: 0 for category in TransitionCategory}
        for category in self.categories.values():
            counts[category] += 1
        return counts

    @property
    def resolved(self) -> int:
        return sum(1 for c in self.categories.values() if c is not TransitionCategory.UNRESOLVED)

    def to_dict(self) -> dict:
        return {state_id_to_str(s): c.value for s, c in sorted(self.categories.items())}

    @classmethod
    def from_dict(cls, data: dict) -> "TransitionRecord":
        return cls({state_id_from_str(s): TransitionCategory(c) for s, c in data.items()})


def classify_transitions(prev_pred: Optional[PredictionMap], cur_pred: Optional[PredictionMap],
                         prev_expected: Sequence[AnswerAtom], cur_expected: Sequence[AnswerAtom],
                         changed: Set[StateId]) -> TransitionRecord:
    """
    Classify every queried state between step t-1 and step t

    Args:
        prev_pred: Prediction at t-1 (a demo answer inside the demo window); None if unanswered
        cur_pred: Prediction at t; None if unanswered
        prev_expected: Expected atoms at t-1
        cur_expected: Expected atoms at t
        changed: The states the step at t touches

    Returns:
        TransitionRecord covering every queried state

    Raises:
        MismatchedQuery: If the two steps were queried over different states
    """
    prev_truth = {atom.state_id: atom.truth for atom in prev_expected}
    cur_truth = {atom.state_id: atom.truth for atom in cur_expected}
    if set(prev_truth) != set(cur_truth):
        raise MismatchedQuery("Consecutive steps queried different state sets")

    categories = {}
    for atom in cur_expected:
        state_id = atom.state_id
        p_prev = prev_pred.by_state.get(state_id) if prev_pred is not None else None
        p_cur = cur_pred.by_state.get(state_id) if cur_pred is not None else None
        if p_prev is None or p_cur is None:
            categories[state_id] = TransitionCategory.UNRESOLVED
            continue

        e_prev = prev_truth[state_id]
        e_cur = cur_truth[state_id]
        if state_id in changed:
            category = TransitionCategory.CU if p_cur == e_cur else TransitionCategory.FU
        elif p_prev == e_prev:
            category = TransitionCategory.MC if p_cur == e_cur else TransitionCategory.HU_IO
        elif p_cur == p_prev:
            category = TransitionCategory.DR
        else:
            category = TransitionCategory.HU_AC
        categories[state_id] = category

    return TransitionRecord(categories)
