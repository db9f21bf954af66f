"""
Running catalog experiments into report bundles.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

from ..calculations.complexity import Verdict
from ..generators.schedule import ScheduleSearchError
from ..integrations.config import Settings, load_settings
from .catalog import ExperimentSpec, get_experiment
from .report import Findings, ReportBundle

logger = logging.getLogger(__name__)


def run_experiment(
    spec: ExperimentSpec,
    settings: Optional[Settings] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ReportBundle:
    """
    Build the sequences, tables and checks of one experiment.

    An exponent schedule that cannot be resolved at the requested horizon ends
    the run with an inconclusive check instead of an error; every other
    failure propagates.

    Args:
        spec: catalog entry
        settings: workbench settings; loaded from file and environment when omitted
        overrides: parameter overrides, validated against the defaults

    Returns:
        ReportBundle: params, checks, traces and sources of the run
    """
    settings = settings or load_settings()
    params = spec.resolve(overrides)
    findings = Findings()
    logger.info("running %s with %s", spec.name, params)
    try:
        spec.runner(params, settings, findings)
    except ScheduleSearchError as e:
        findings.check("schedule resolves within the representable range", Verdict.INCONCLUSIVE, str(e))
    bundle = ReportBundle(spec.name, params, findings, spec.tag)
    logger.info("%s: %s", spec.name, bundle.verdict.value)
    return bundle


def run_many(
    names: Sequence[str],
    settings: Optional[Settings] = None,
    jobs: int = 1,
) -> List[ReportBundle]:
    """Run several experiments, ``jobs`` at a time; bundles come back in the order of ``names``."""
    settings = settings or load_settings()
    specs = [get_experiment(name) for name in names]
    if jobs <= 1:
        return [run_experiment(spec, settings) for spec in specs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda spec: run_experiment(spec, settings), specs))
