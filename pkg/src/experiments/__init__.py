"""
Experiments package: the catalog of verification experiments and the harness that runs them.
"""

from .catalog import CATALOG, ExperimentSpec, get_experiment, list_experiments, select_experiment
from .harness import run_experiment, run_many
from .report import Check, Findings, ReportBundle, combine

__all__ = [
    'CATALOG', 'ExperimentSpec', 'get_experiment', 'list_experiments', 'select_experiment',
    'run_experiment', 'run_many',
    'Check', 'Findings', 'ReportBundle', 'combine',
]
