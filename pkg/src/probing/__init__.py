"""
src.probing - Probe Module

Experiment protocols and concurrent batch execution
"""

from .protocols import (
    EpisodeView,
    Protocol,
    QueryRecord,
    Trial,
    episode_view,
    make_trial_id,
    run_compressed_init,
    run_final_query,
    run_intermediate_probing,
    score_queries,
)
from .runner import BatchRunner, TrialSpec, run_trial

__all__ = [
    'EpisodeView',
    'Protocol',
    'QueryRecord',
    'Trial',
    'episode_view',
    'make_trial_id',
    'run_compressed_init',
    'run_final_query',
    'run_intermediate_probing',
    'score_queries',
    'BatchRunner',
    'TrialSpec',
    'run_trial',
]

__version__ = '1.0.0'
__description__ = 'Probing protocols for state-tracking episodes'
