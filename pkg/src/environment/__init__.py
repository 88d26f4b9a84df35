"""
src.environment - Environment Module

Ground-truth state machine and seeded instance generation
"""

from .state_machine import (
    EnvConfig,
    GroundState,
    QueryOrdering,
    StateId,
    StateKind,
    StepAction,
    apply_step,
    changed_states,
    enumerate_states,
    initial_state,
    query_order,
    replay,
)
from .genesis import (
    GenerationSettings,
    Instance,
    InstructionVariant,
    Lexicon,
    LexiconMode,
    TokenMode,
    derive_seed,
    gen_distractor,
    gen_instance,
    gen_lexicon,
    gen_steps,
)
from .distractor_pool import DEFAULT_SENTENCES, load_sentence_pool

__all__ = [
    'EnvConfig',
    'GroundState',
    'QueryOrdering',
    'StateId',
    'StateKind',
    'StepAction',
    'apply_step',
    'changed_states',
    'enumerate_states',
    'initial_state',
    'query_order',
    'replay',
    'GenerationSettings',
    'Instance',
    'InstructionVariant',
    'Lexicon',
    'LexiconMode',
    'TokenMode',
    'derive_seed',
    'gen_distractor',
    'gen_instance',
    'gen_lexicon',
    'gen_steps',
    'DEFAULT_SENTENCES',
    'load_sentence_pool',
]

__version__ = '1.0.0'
__description__ = 'Box-and-key environment and instance generation'
