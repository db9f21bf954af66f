"""
Report bundles: verdicts, traces and provenance of one experiment run.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List

import pandas as pd

from .. import __version__
from ..calculations.complexity import Verdict
from ..components.words import SymbolicSequence
from ..integrations.sequence_io import atomic_write, dump_json, frame_text

logger = logging.getLogger(__name__)


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """FAIL beats INCONCLUSIVE beats PASS; nothing checked is inconclusive."""
    seen = list(verdicts)
    if not seen:
        return Verdict.INCONCLUSIVE
    if Verdict.FAIL in seen:
        return Verdict.FAIL
    if Verdict.INCONCLUSIVE in seen:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def verdict_for(ok: bool, checked: int = 1) -> Verdict:
    if checked == 0:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS if ok else Verdict.FAIL


@dataclass(frozen=True)
class Check:
    name: str
    verdict: Verdict
    detail: str = ""

    def as_dict(self) -> Dict[str, str]:
        return {"check": self.name, "verdict": self.verdict.value, "detail": self.detail}


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class Findings:
    """What a runner produces: checks in order, named traces and the sequences it analysed."""

    checks: List[Check] = field(default_factory=list)
    traces: Dict[str, pd.DataFrame] = field(default_factory=dict)
    sources: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def check(self, name: str, verdict: Verdict, detail: str = "") -> Check:
        item = Check(name, verdict, detail)
        self.checks.append(item)
        if verdict is not Verdict.PASS:
            logger.warning("%s: %s %s", name, verdict.value, detail)
        return item

    def trace(self, name: str, frame: pd.DataFrame) -> None:
        if name in self.traces:
            raise ValueError(f"duplicate trace name {name!r}")
        self.traces[name] = frame

    def source(self, seq: SymbolicSequence, **extra: Any) -> None:
        entry = {"provenance": seq.provenance.as_dict(), "kind": seq.kind.value}
        entry.update(_plain(extra))
        self.sources.append(entry)


@dataclass
class ReportBundle:
    name: str
    params: Dict[str, Any]
    findings: Findings
    tag: str = ""

    @property
    def verdict(self) -> Verdict:
        return combine(c.verdict for c in self.findings.checks)

    @property
    def exit_code(self) -> int:
        return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 2}[self.verdict]

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": self.name,
            "tag": self.tag,
            "version": __version__,
            "params": _plain(self.params),
            "verdict": self.verdict.value,
            "checks": [c.as_dict() for c in self.findings.checks],
            "notes": list(self.findings.notes),
        }

    def write(self, out_dir: str, fmt: str = "tsv") -> str:
        """
        Write the bundle under ``out_dir/<name>``: summary.json, provenance.json and
        one trace file per trace. Every file is written atomically and the
        content depends only on the parameters.
        """
        folder = os.path.join(out_dir, self.name)
        os.makedirs(folder, exist_ok=True)
        atomic_write(os.path.join(folder, "summary.json"), dump_json(self.summary()))
        provenance = {"version": __version__, "params": _plain(self.params), "sources": self.findings.sources}
        atomic_write(os.path.join(folder, "provenance.json"), dump_json(provenance))
        for trace, frame in sorted(self.findings.traces.items()):
            atomic_write(os.path.join(folder, f"{trace}.{fmt}"), frame_text(frame, fmt))
        logger.info("wrote %s bundle to %s", self.name, folder)
        return folder
