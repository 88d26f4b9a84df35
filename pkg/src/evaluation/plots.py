"""
Plotting Module
Vector renderings of per-step curves and transition panels
"""

import logging
from pathlib import Path

import matplotlib
matplotlib.use('Agg')  # Use non-interactive backend
import matplotlib.pyplot as plt
import seaborn as sns
import pandas as pd

from .aggregation import transition_long_form

sns.set_style('whitegrid')

logger = logging.getLogger(__name__)

DEMO_WINDOW_COLOR = 'purple'


def plot_step_curves(curves: pd.DataFrame, demo_window_end: int, title: str, path) -> Path:
    """
    Plot mean Step-EM and State-EM per step

    Args:
        curves: Output of aggregate_curves
        demo_window_end: Last step whose answer was demonstrated (n_shots)
        title: Figure title
        path: Output file (.svg)

    Returns:
        Path of the written figure
    """
    path = Path(path)
    plt.figure(figsize=(8, 4))
    plt.plot(curves['step'], curves['mean_step_em'] * 100, marker='o', label='Step-EM')
    plt.plot(curves['step'], curves['mean_state_em'] * 100, marker='s', label='State-EM')
    plt.axvline(demo_window_end, color=DEMO_WINDOW_COLOR, linestyle='--', label='End of demonstrations')
    plt.ylim(-5, 105)
    plt.title(title)
    plt.xlabel('Step')
    plt.ylabel('Score (%)')
    plt.legend()
    plt.tight_layout()
    plt.savefig(path, format='svg')
    plt.close()

    logger.info(f"Curve plot written to {path}")
    return path


def plot_transition_panels(curves: pd.DataFrame, title: str, path, normalized: bool = False) -> Path:
    """
    Two panels of transition categories per step: incorrect and correct outcomes

    Args:
        curves: Output of aggregate_curves
        title: Figure title
        path: Output file (.svg)
        normalized: Plot per-step fractions instead of raw counts

    Returns:
        Path of the written figure
    """
    path = Path(path)
    long_form = transition_long_form(curves)
    value = 'fraction' if normalized else 'count'

    fig, axes = plt.subplots(1, 2, figsize=(12, 4), sharey=normalized)
    for ax, outcome in zip(axes, ('incorrect', 'correct')):
        panel = long_form[long_form['outcome'] == outcome]
        if not panel.empty:
            sns.lineplot(data=panel, x='step', y=value, hue='category', marker='o', ax=ax)
        ax.set_title(f'{outcome.capitalize()} outcome')
        ax.set_xlabel('Step')
        ax.set_ylabel('Fraction of resolved states' if normalized else 'Count')

    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, format='svg')
    plt.close(fig)

    logger.info(f"Transition plot written to {path}")
    return path
