"""
src.prompting - Prompt Module

Instruction, step, query and answer rendering plus chat message assembly
"""

from .renderer import (
    ANSWER_PREFIX,
    SYSTEM_MESSAGE,
    AnswerAtom,
    DemoBlock,
    PromptBundle,
    compose_bundle,
    expected_atoms,
    render_answer,
    render_instruction,
    render_query,
    render_step,
    render_truth,
)
from .messages import (
    ChatMessage,
    MessageList,
    RenderStyle,
    Role,
    assemble,
    messages_from_dicts,
    messages_to_dicts,
)

__all__ = [
    'ANSWER_PREFIX',
    'SYSTEM_MESSAGE',
    'AnswerAtom',
    'DemoBlock',
    'PromptBundle',
    'compose_bundle',
    'expected_atoms',
    'render_answer',
    'render_instruction',
    'render_query',
    'render_step',
    'render_truth',
    'ChatMessage',
    'MessageList',
    'RenderStyle',
    'Role',
    'assemble',
    'messages_from_dicts',
    'messages_to_dicts',
]

__version__ = '1.0.0'
__description__ = 'Prompt rendering for state-tracking episodes'
