"""
src - Situation Tracking Evaluation Harness

Main package of the harness with:
- Box-and-key environment and instance generation (environment)
- Prompt rendering and message assembly (prompting)
- Answer parsing, metrics and transition analysis (evaluation)
- HTTP and scripted model clients (clients)
- Probing protocols and batch execution (probing)
- Configuration, storage, reporting and CLI (utils)
- Environment Management (env_loader)
"""

from . import environment
from . import prompting
from . import evaluation
from . import clients
from . import probing
from . import utils
from .env_loader import (
    EnvironmentLoader,
    init_env,
    get,
    get_bool,
    get_int,
    get_float,
    get_list,
)

__all__ = [
    'environment',
    'prompting',
    'evaluation',
    'clients',
    'probing',
    'utils',
    'EnvironmentLoader',
    'init_env',
    'get',
    'get_bool',
    'get_int',
    'get_float',
    'get_list',
]

__version__ = '1.0.0'
__description__ = 'Situation tracking evaluation harness for chat language models'
