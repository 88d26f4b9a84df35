"""
src.clients - Client Module

HTTP chat-completions client and scripted reference agents
"""

from .chat_client import AUTH_STATUS, RETRY_STATUS, ChatCompletionClient, ClientConfig, TokenBucket
from .scripted_agents import AgentKind, OracleView, ScriptedAgent, ScriptedAgentKind, scripted_complete

__all__ = [
    'AUTH_STATUS',
    'RETRY_STATUS',
    'ChatCompletionClient',
    'ClientConfig',
    'TokenBucket',
    'AgentKind',
    'OracleView',
    'ScriptedAgent',
    'ScriptedAgentKind',
    'scripted_complete',
]

__version__ = '1.0.0'
__description__ = 'Model clients for state-tracking evaluation'
