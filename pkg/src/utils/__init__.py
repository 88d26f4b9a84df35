"""
src.utils - Utility Module

Run configuration, record storage, reporting and the command line
"""

from .main import build_parser, cmd_generate, cmd_report, cmd_run, main
from .run_config import Cell, RunConfig, expand_cells, generate_instances, load_run_config
from .storage import SCHEMA_VERSION, JsonlWriter, completed_ids, read_payloads, read_records, write_records
from .reporting import load_trials, summary_grid, summary_rows, write_report

__all__ = [
    'build_parser',
    'cmd_generate',
    'cmd_report',
    'cmd_run',
    'main',
    'Cell',
    'RunConfig',
    'expand_cells',
    'generate_instances',
    'load_run_config',
    'SCHEMA_VERSION',
    'JsonlWriter',
    'completed_ids',
    'read_payloads',
    'read_records',
    'write_records',
    'load_trials',
    'summary_grid',
    'summary_rows',
    'write_report',
]

__version__ = '1.0.0'
__description__ = 'Utility Module'
