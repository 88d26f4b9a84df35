"""
Reporting Module
Summary grid, per-step curves, transition panels and plots from transcripts
"""

import logging
import re
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..environment.genesis import LexiconMode
from ..evaluation.aggregation import aggregate_curves, transition_long_form
from ..evaluation.plots import plot_step_curves, plot_transition_panels
from ..exceptions import EmptyInput
from ..probing.protocols import Protocol, Trial
from .run_config import DEFAULT_VARIANT_LABELS
from .storage import TRIAL_KIND, read_payloads

logger = logging.getLogger(__name__)

CELL_COLUMNS = ['lexicon_mode', 'variant', 'n_shots', 'distractors']
GROUP_COLUMNS = ['model_label', 'protocol', 'style']


def load_trials(paths: Iterable) -> List[Trial]:
    """Read and rescore trial records; a trial id seen again replaces the earlier copy"""
    by_id: Dict[str, dict] = {}
    total = 0
    for path in paths:
        for payload in read_payloads(path, TRIAL_KIND):
            by_id.pop(payload["trial_id"], None)
            by_id[payload["trial_id"]] = payload
            total += 1
    if total > len(by_id):
        logger.warning(f"Dropped {total - len(by_id)} duplicate trial records")
    trials = [Trial.from_record(payload) for payload in by_id.values()]
    logger.info(f"Loaded {len(trials)} trials")
    return trials


def protocol_label(trial: Trial) -> str:
    if trial.protocol is Protocol.COMPRESSED:
        return f"compressed-k{trial.k}" + ("-perstep" if trial.per_step else "")
    return trial.protocol.value


def _cell(trial: Trial) -> dict:
    return {
        'lexicon_mode': trial.instance.lexicon.mode.key,
        'variant': trial.instance.variant.value,
        'n_shots': trial.instance.n_shots,
        'distractors': trial.instance.distractors is not None,
    }


def trial_rows(trials: Iterable[Trial]) -> pd.DataFrame:
    """One row per trial with its headline score"""
    rows = []
    for trial in trials:
        score = trial.headline_score
        rows.append({
            'model_label': trial.model_label,
            'protocol': protocol_label(trial),
            'style': trial.style.value,
            **_cell(trial),
            'trial_id': trial.trial_id,
            'step_em': score.step_em if score is not None else np.nan,
            'state_em': score.state_em if score is not None else np.nan,
            'issued': trial.issued,
            'answered': trial.answered,
        })
    return pd.DataFrame(rows)


def summary_rows(trials: Iterable[Trial]) -> pd.DataFrame:
    """
    Per-cell means, sample count and response rate

    Unanswered headline queries are excluded from the means but still count
    toward the response rate.

    Args:
        trials: Rescored trials

    Returns:
        DataFrame with one row per (model, protocol, style, cell)
    """
    frame = trial_rows(trials)
    if frame.empty:
        raise EmptyInput("No trials to summarize")

    grouped = frame.groupby(GROUP_COLUMNS + CELL_COLUMNS, sort=True)
    summary = pd.DataFrame({
        'step_em': grouped['step_em'].mean(),
        'state_em': grouped['state_em'].mean(),
        'samples': grouped.size(),
        'scored': grouped['step_em'].count(),
        'issued': grouped['issued'].sum(),
        'answered': grouped['answered'].sum(),
    }).reset_index()
    summary['response_rate'] = summary['answered'] / summary['issued']
    return summary


def format_pair(step_em: float, state_em: float) -> str:
    """'Step-EM / State-EM' as percentages"""
    if pd.isna(step_em) or pd.isna(state_em):
        return "n/a"
    return f"{_pct(step_em)} / {_pct(state_em)}"


def _pct(value: float) -> str:
    text = f"{value * 100:.1f}".rstrip('0').rstrip('.')
    return f"{text}%"


def _row_label(mode_key: str, distractors: bool) -> str:
    label = LexiconMode.from_key(mode_key).label
    return f"{label} + Distractors" if distractors else label


def summary_grid(summary: pd.DataFrame, variant_labels: Optional[Dict[str, str]] = None) -> pd.DataFrame:
    """
    Grid of 'Step-EM / State-EM' cells: variant blocks x lexicon rows, shot columns

    Args:
        summary: Rows of one (model, protocol, style) group from summary_rows
        variant_labels: Block labels keyed by variant value

    Returns:
        DataFrame indexed by (block, row)
    """
    labels = dict(DEFAULT_VARIANT_LABELS)
    labels.update(variant_labels or {})
    variant_order = list(DEFAULT_VARIANT_LABELS)

    frame = summary.copy()
    frame['cell'] = [format_pair(s, t) for s, t in zip(frame['step_em'], frame['state_em'])]
    frame['block'] = frame['variant'].map(lambda v: labels.get(v, v))
    frame['row'] = [_row_label(m, d) for m, d in zip(frame['lexicon_mode'], frame['distractors'])]
    frame['column'] = frame['n_shots'].map(lambda n: f"{n}-shot")
    frame['variant_rank'] = frame['variant'].map(lambda v: variant_order.index(v) if v in variant_order else 99)
    frame = frame.sort_values(['variant_rank', 'distractors', 'lexicon_mode', 'n_shots'])

    grid = frame.pivot_table(index=['block', 'row'], columns='column', values='cell',
                             aggfunc='first', sort=False)
    shot_columns = sorted(grid.columns, key=lambda c: int(c.split('-')[0]))
    return grid[shot_columns]


def compressed_comparison(summary: pd.DataFrame) -> pd.DataFrame:
    """
    Side-by-side final-query and compressed-initialization scores per cell

    Returns:
        Empty DataFrame unless both protocols exist for some model
    """
    keys = ['model_label', 'style'] + CELL_COLUMNS
    normal = summary[summary['protocol'] == Protocol.FINAL.value]
    compressed = summary[summary['protocol'].str.startswith(Protocol.COMPRESSED.value)
                         & ~summary['protocol'].str.endswith('perstep')]
    if normal.empty or compressed.empty:
        return pd.DataFrame()

    merged = compressed.merge(normal[keys + ['step_em', 'state_em']], on=keys, suffixes=('', '_normal'))
    merged = merged.rename(columns={'step_em': 'step_em_compressed', 'state_em': 'state_em_compressed',
                                    'protocol': 'compressed_protocol'})
    merged['normal'] = [format_pair(s, t) for s, t in zip(merged['step_em_normal'], merged['state_em_normal'])]
    merged['compressed'] = [format_pair(s, t) for s, t in
                            zip(merged['step_em_compressed'], merged['state_em_compressed'])]
    return merged[keys + ['compressed_protocol', 'normal', 'compressed', 'step_em_normal', 'state_em_normal',
                          'step_em_compressed', 'state_em_compressed']]


def curve_tables(trials: Iterable[Trial]):
    """
    Per-step curves and transition counts for step-wise probing trials

    Returns:
        (curves, transitions) long-form DataFrames keyed by group and cell columns
    """
    groups: Dict[tuple, List[Trial]] = {}
    for trial in trials:
        if not trial.probes_each_step:
            continue
        cell = _cell(trial)
        key = (trial.model_label, protocol_label(trial), trial.style.value) + tuple(cell[c] for c in CELL_COLUMNS)
        groups.setdefault(key, []).append(trial)

    curve_frames, transition_frames = [], []
    for key in sorted(groups, key=str):
        labels = dict(zip(GROUP_COLUMNS + CELL_COLUMNS, key))
        curves = aggregate_curves(t.outcomes() for t in groups[key])
        curves.insert(0, 'demo_window_end', labels['n_shots'])
        for column, value in reversed(list(labels.items())):
            curves.insert(0, column, value)
        curve_frames.append(curves)

        transitions = transition_long_form(curves)
        for column, value in reversed(list(labels.items())):
            transitions.insert(0, column, value)
        transition_frames.append(transitions)

    if not curve_frames:
        return pd.DataFrame(), pd.DataFrame()
    return pd.concat(curve_frames, ignore_index=True), pd.concat(transition_frames, ignore_index=True)


def _slug(*parts) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", "-".join(str(p) for p in parts)).strip("_")


def write_report(trials: List[Trial], out_dir, variant_labels: Optional[Dict[str, str]] = None,
                 make_plots: bool = True) -> Dict[str, Path]:
    """
    Write every report table and figure

    Args:
        trials: Rescored trials
        out_dir: Report directory
        variant_labels: Block labels for the grid
        make_plots: Also render SVG figures

    Returns:
        Mapping of output name to path

    Raises:
        EmptyInput: If there are no trials
    """
    if not trials:
        raise EmptyInput("No transcripts to report on")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}

    summary = summary_rows(trials)
    outputs['summary'] = out_dir / 'summary.csv'
    summary.to_csv(outputs['summary'], index=False)

    for (model, protocol, style), block in summary.groupby(GROUP_COLUMNS, sort=True):
        name = f"grid_{_slug(model, protocol, style)}"
        outputs[name] = out_dir / f"{name}.csv"
        summary_grid(block, variant_labels).to_csv(outputs[name])

    comparison = compressed_comparison(summary)
    if not comparison.empty:
        outputs['compressed_vs_normal'] = out_dir / 'compressed_vs_normal.csv'
        comparison.to_csv(outputs['compressed_vs_normal'], index=False)

    curves, transitions = curve_tables(trials)
    if not curves.empty:
        outputs['curves'] = out_dir / 'curves.csv'
        curves.to_csv(outputs['curves'], index=False)
        outputs['transitions'] = out_dir / 'transitions.csv'
        transitions.to_csv(outputs['transitions'], index=False)
        if make_plots:
            outputs.update(_write_plots(curves, out_dir / 'plots'))

    for name, path in outputs.items():
        logger.info(f"Report output {name}: {path}")
    return outputs


def _write_plots(curves: pd.DataFrame, plot_dir: Path) -> Dict[str, Path]:
    plot_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    for key, group in curves.groupby(GROUP_COLUMNS + CELL_COLUMNS, sort=True):
        slug = _slug(*key)
        title = " | ".join(str(part) for part in key)
        demo_end = int(group['demo_window_end'].iloc[0])
        outputs[f"curves_{slug}"] = plot_step_curves(group, demo_end, title, plot_dir / f"{slug}_curves.svg")
        outputs[f"transitions_{slug}"] = plot_transition_panels(
            group, title, plot_dir / f"{slug}_transitions.svg")
        outputs[f"transitions_norm_{slug}"] = plot_transition_panels(
            group, title, plot_dir / f"{slug}_transitions_normalized.svg", normalized=True)
    return outputs
