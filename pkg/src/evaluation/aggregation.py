"""
Curve Aggregation Module
Reduces per-step scores and transition records of many trials into per-step curves
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from .metrics import StepScore
from .transitions import CORRECT_OUTCOME, INCORRECT_OUTCOME, TransitionCategory, TransitionRecord

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ['step', 'trials', 'answered', 'mean_state_em', 'mean_step_em']
RESOLVED_CATEGORIES = INCORRECT_OUTCOME + CORRECT_OUTCOME


@dataclass(frozen=True)
class StepOutcome:
    """One queried step of one trial; score is None when the query got no response"""
    step_index: int
    score: Optional[StepScore]
    transitions: Optional[TransitionRecord] = None


def _count_column(category: TransitionCategory) -> str:
    return f"count_{category.value}"


def _fraction_column(category: TransitionCategory) -> str:
    return f"frac_{category.value}"


def aggregate_curves(trials: Iterable[Sequence[StepOutcome]]) -> pd.DataFrame:
    """
    Per-step means and transition counts over a set of trials

    Unanswered queries are left out of the means but counted in 'trials'.
    The reduction is order-insensitive.

    Args:
        trials: One sequence of StepOutcome per trial

    Returns:
        DataFrame with one row per step index, sorted by step
    """
    rows = []
    for outcomes in trials:
        for outcome in outcomes:
            row = {
                'step': outcome.step_index,
                'answered': outcome.score is not None,
                'state_em': outcome.score.state_em if outcome.score is not None else np.nan,
                'step_em': outcome.score.step_em if outcome.score is not None else np.nan,
            }
            counts = outcome.transitions.counts if outcome.transitions is not None else {}
            for category in TransitionCategory:
                row[_count_column(category)] = counts.get(category, 0)
            rows.append(row)

    count_columns = [_count_column(c) for c in TransitionCategory]
    if not rows:
        columns = CURVE_COLUMNS + count_columns + ['resolved', 'incorrect_total', 'correct_total']
        return pd.DataFrame(columns=columns)

    frame = pd.DataFrame(rows)
    grouped = frame.groupby('step')
    curves = pd.DataFrame({
        'trials': grouped.size(),
        'answered': grouped['answered'].sum().astype(int),
        'mean_state_em': grouped['state_em'].mean(),
        'mean_step_em': grouped['step_em'].mean(),
    })
    curves = curves.join(grouped[count_columns].sum())

    curves['incorrect_total'] = curves[[_count_column(c) for c in INCORRECT_OUTCOME]].sum(axis=1)
    curves['correct_total'] = curves[[_count_column(c) for c in CORRECT_OUTCOME]].sum(axis=1)
    curves['resolved'] = curves['incorrect_total'] + curves['correct_total']

    # fractions per step; steps without resolved states stay NaN
    denominator = curves['resolved'].replace(0, np.nan)
    for category in RESOLVED_CATEGORIES:
        curves[_fraction_column(category)] = curves[_count_column(category)] / denominator

    curves = curves.reset_index().sort_values('step').reset_index(drop=True)
    logger.debug(f"Aggregated {len(frame)} step outcomes into {len(curves)} steps")
    return curves


def transition_long_form(curves: pd.DataFrame) -> pd.DataFrame:
    """
    Reshape curve counts into (step, outcome, category, count, fraction) rows

    Args:
        curves: Output of aggregate_curves

    Returns:
        Long-form DataFrame for the incorrect/correct outcome panels
    """
    rows = []
    for _, row in curves.iterrows():
        for outcome, categories in (('incorrect', INCORRECT_OUTCOME), ('correct', CORRECT_OUTCOME)):
            for category in categories:
                rows.append({
                    'step': int(row['step']),
                    'outcome': outcome,
                    'category': category.value,
                    'count': int(row[_count_column(category)]),
                    'fraction': row.get(_fraction_column(category), np.nan),
                })
    return pd.DataFrame(rows, columns=['step', 'outcome', 'category', 'count', 'fraction'])
