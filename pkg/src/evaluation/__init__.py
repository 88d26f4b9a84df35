"""
src.evaluation - Evaluation Module

Answer parsing, step metrics, transition analysis, curve aggregation and plots
"""

from .answer_parsing import (
    STATE_ATOM_PATTERN,
    PredictionAnomalies,
    PredictionMap,
    RawAtom,
    extract_states,
    normalize,
    parse_prediction,
)
from .metrics import StepScore, score_step
from .transitions import (
    CORRECT_OUTCOME,
    INCORRECT_OUTCOME,
    TransitionCategory,
    TransitionRecord,
    classify_transitions,
)
from .aggregation import StepOutcome, aggregate_curves, transition_long_form

__all__ = [
    'STATE_ATOM_PATTERN',
    'PredictionAnomalies',
    'PredictionMap',
    'RawAtom',
    'extract_states',
    'normalize',
    'parse_prediction',
    'StepScore',
    'score_step',
    'CORRECT_OUTCOME',
    'INCORRECT_OUTCOME',
    'TransitionCategory',
    'TransitionRecord',
    'classify_transitions',
    'StepOutcome',
    'aggregate_curves',
    'transition_long_form',
]

__version__ = '1.0.0'
__description__ = 'Scoring and analysis of state-tracking transcripts'
