"""
Complexity profiles, special-word censuses and finite-horizon bound reports.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ..components.language import LanguageTable, Periodicity, detect_eventual_periodicity
from ..components.words import DomainError, Provenance, SequenceKind, SymbolicSequence
from ..generators.schedule import ExponentSchedule, GrowthFunction, ScheduleSearchError

logger = logging.getLogger(__name__)

DEFAULT_PERIODICITY_HORIZON = 1 << 14
MAX_CANDIDATE_PERIOD = 4


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ComplexityProfile:
    """c(n) = number of distinct n-words, for n = 1..n_max + 1, with saturation flags."""

    counts: Tuple[int, ...]
    saturated: Tuple[bool, ...]
    n_max: int
    window: Tuple[int, int]
    provenance: Provenance
    alphabet_size: int

    def c(self, n: int) -> int:
        if not 1 <= n <= len(self.counts):
            raise DomainError(f"level {n} is outside the profile (1..{len(self.counts)})")
        return self.counts[n - 1]

    def is_saturated(self, n: int) -> bool:
        return 1 <= n <= len(self.saturated) and self.saturated[n - 1]

    def saturated_levels(self) -> List[int]:
        return [n for n in range(1, self.n_max + 1) if self.saturated[n - 1]]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "n": list(range(1, self.n_max + 1)),
                "count": list(self.counts[: self.n_max]),
                "saturated": list(self.saturated[: self.n_max]),
            }
        )


def profile(table: LanguageTable) -> ComplexityProfile:
    """
    Read the complexity profile off a language table.

    Args:
        table: the language table

    Returns:
        ComplexityProfile: counts and saturation flags for levels 1..n_max + 1
    """
    levels = range(1, table.n_max + 2)
    return ComplexityProfile(
        counts=tuple(table.count(n) for n in levels),
        saturated=tuple(table.is_saturated(n) for n in levels),
        n_max=table.n_max,
        window=table.window,
        provenance=table.provenance,
        alphabet_size=len(table.alphabet),
    )


@dataclass(frozen=True)
class SpecialWordReport:
    """Right- and left-special words per level, with their extension sets."""

    right: Dict[int, Dict[bytes, FrozenSet[int]]]
    left: Dict[int, Dict[bytes, FrozenSet[int]]]
    maximal_right: Dict[int, FrozenSet[bytes]]
    n_max: int
    window: Tuple[int, int]
    provenance: Provenance

    def rs_count(self, n: int) -> int:
        return len(self.right[n])

    def ls_count(self, n: int) -> int:
        return len(self.left[n])

    def right_excess(self, n: int) -> int:
        """Σ over RS(n) of (|ext(w)| - 1)."""
        return sum(len(ext) - 1 for ext in self.right[n].values())

    def left_excess(self, n: int) -> int:
        return sum(len(ext) - 1 for ext in self.left[n].values())


def special_census(table: LanguageTable) -> SpecialWordReport:
    """
    RS(n) and LS(n) for n = 1..n_max, and the maximal right-special words: w in RS(n)
    such that no sw is right-special. Maximality is only claimed where levels n, n+1
    and n+2 are saturated.
    """
    right: Dict[int, Dict[bytes, FrozenSet[int]]] = {}
    left: Dict[int, Dict[bytes, FrozenSet[int]]] = {}
    for n in range(1, table.n_max + 1):
        right[n] = {w: table.right_ext[w] for w in table.words[n] if len(table.right_ext[w]) >= 2}
        left[n] = {w: table.left_ext[w] for w in table.words[n] if len(table.left_ext[w]) >= 2}
    maximal: Dict[int, FrozenSet[bytes]] = {}
    for n in range(1, table.n_max):
        if not all(table.is_saturated(m) for m in (n, n + 1, n + 2)):
            continue
        longer = right[n + 1]
        maximal[n] = frozenset(
            w for w in right[n] if not any(bytes([s]) + w in longer for s in table.left_ext[w])
        )
    return SpecialWordReport(right, left, maximal, table.n_max, table.window, table.provenance)


@dataclass(frozen=True)
class CountingCheck:
    n: int
    c_n: int
    c_next: int
    rs: int
    excess: int

    @property
    def holds(self) -> bool:
        """c(n+1) >= c(n) + #RS(n)."""
        return self.c_next >= self.c_n + self.rs

    @property
    def exact(self) -> bool:
        """c(n+1) - c(n) = Σ over RS(n) of (|ext| - 1)."""
        return self.c_next - self.c_n == self.excess

    def describe(self) -> str:
        return (
            f"n={self.n}: c(n)={self.c_n}, c(n+1)={self.c_next}, #RS={self.rs}, "
            f"extension excess={self.excess}"
        )


def check_counting(prof: ComplexityProfile, census: SpecialWordReport) -> List[CountingCheck]:
    """The counting inequality and the extension identity on every level where n and n+1 are saturated."""
    if prof.provenance != census.provenance or prof.window != census.window:
        raise DomainError("profile and census come from different tables")
    checks = []
    for n in range(1, prof.n_max + 1):
        if not (prof.is_saturated(n) and prof.is_saturated(n + 1)):
            continue
        checks.append(CountingCheck(n, prof.c(n), prof.c(n + 1), census.rs_count(n), census.right_excess(n)))
    bad = [c for c in checks if not (c.holds and c.exact)]
    for check in bad:
        logger.warning("counting check fails at %s", check.describe())
    return checks


class PeriodicityStatus(Enum):
    EVENTUALLY_PERIODIC = "eventually periodic"
    UNCONFIRMED = "bounded complexity but no period found within horizon"
    APERIODIC_THROUGH_HORIZON = "aperiodic through horizon (no Morse-Hedlund trigger)"


@dataclass(frozen=True)
class MorseHedlundResult:
    status: PeriodicityStatus
    trigger: Optional[int]
    left: Optional[Periodicity]
    right: Optional[Periodicity]


def morse_hedlund_classify(
    prof: ComplexityProfile,
    seq: SymbolicSequence,
    horizon: int = DEFAULT_PERIODICITY_HORIZON,
) -> MorseHedlundResult:
    """
    If c(n) <= n at some saturated n the point must be eventually periodic, so both
    tails are searched for a period; otherwise the point is reported aperiodic
    through the horizon.
    """
    trigger = next((n for n in prof.saturated_levels() if prof.c(n) <= n), None)
    if trigger is None:
        return MorseHedlundResult(PeriodicityStatus.APERIODIC_THROUGH_HORIZON, None, None, None)
    right = detect_eventual_periodicity(seq, "right", horizon)
    left = detect_eventual_periodicity(seq, "left", horizon) if seq.kind is SequenceKind.BI_INFINITE else None
    found = right is not None and (left is not None or seq.kind is SequenceKind.RIGHT_INFINITE)
    status = PeriodicityStatus.EVENTUALLY_PERIODIC if found else PeriodicityStatus.UNCONFIRMED
    if not found:
        logger.warning("c(%d) = %d <= %d but no period was found within %d symbols", trigger, prof.c(trigger), trigger, horizon)
    return MorseHedlundResult(status, trigger, left, right)


class BoundMode(Enum):
    CEILING = "ceiling"
    LIMSUP = "limsup"
    LIMINF = "liminf"


Exact = Union[int, Fraction]


def _exact(value: Fraction) -> Exact:
    return int(value) if value.denominator == 1 else value


def render_exact(value: Exact) -> Union[int, str]:
    """Integers stay integers; fractions are written p/q."""
    return value if isinstance(value, int) else str(value)


@dataclass(frozen=True)
class BoundSpec:
    """alpha n + g(n); alpha may be a fraction such as 3/2."""

    alpha: Fraction
    g: GrowthFunction
    mode: BoundMode

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Fraction(self.alpha))

    @classmethod
    def parse(cls, text: str) -> "BoundSpec":
        """Parse ``alpha,g,mode``, e.g. ``3,sqrt,ceiling`` or ``2,0,liminf``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise DomainError(f"bound must read 'alpha,g,mode', got {text!r}")
        try:
            alpha = Fraction(parts[0])
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"alpha must be a rational number, got {parts[0]!r}") from None
        try:
            mode = BoundMode(parts[2].lower())
        except ValueError:
            raise DomainError(f"mode must be ceiling, limsup or liminf, got {parts[2]!r}") from None
        return cls(alpha, GrowthFunction.from_tag(parts[1]), mode)

    def value(self, n: int) -> Exact:
        return _exact(self.alpha * n + self.g(n))

    def describe(self) -> str:
        return f"c(n) vs {self.alpha}n + {self.g.tag}(n) [{self.mode.value}]"


@dataclass(frozen=True)
class BoundReport:
    """
    Margins m(n) = c(n) - (alpha n + g(n)) on the reported levels and a
    finite-horizon verdict.

    For a ceiling the verdict passes when every margin is <= 0. For the
    limsup-style lower bound the running maximum of the margin, and for the
    liminf-style one the minimum of the margin over the rest of the horizon, is
    read at the checkpoints (dyadic unless given); it passes when those values
    never decrease, end positive and end above where they started. Values that
    are flat between the last two checkpoints give INCONCLUSIVE.
    """

    spec: BoundSpec
    levels: Tuple[int, ...]
    margins: Tuple[Exact, ...]
    checkpoints: Tuple[Tuple[int, Exact], ...]
    horizon: int
    verdict: Verdict

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"n": list(self.levels), "margin": [render_exact(m) for m in self.margins]})

    def reproduces(self, prof: ComplexityProfile) -> bool:
        return all(prof.c(n) - self.spec.value(n) == m for n, m in zip(self.levels, self.margins))


def _checkpoints(levels: Sequence[int]) -> List[int]:
    if not levels:
        return []
    horizon = levels[-1]
    marks = []
    t = 1
    while t < horizon:
        marks.append(t)
        t *= 2
    marks.append(horizon)
    return marks


def _growth_verdict(values: Sequence[Exact]) -> Verdict:
    if len(values) < 2:
        return Verdict.INCONCLUSIVE
    if any(b < a for a, b in zip(values, values[1:])):
        return Verdict.FAIL
    if values[-1] <= 0 or values[-1] == values[0]:
        return Verdict.FAIL
    if values[-1] == values[-2]:
        # flat over the last stretch: growth beyond the horizon is not yet visible
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def bound_report(
    prof: ComplexityProfile,
    alpha: Exact,
    g: Optional[GrowthFunction] = None,
    mode: BoundMode = BoundMode.CEILING,
    points: Optional[Sequence[int]] = None,
    marks: Optional[Sequence[int]] = None,
) -> BoundReport:
    """
    Compare c(n) with alpha*n + g(n) on the saturated levels (or on ``points``).

    Args:
        prof: complexity profile
        alpha: linear coefficient
        g: growth term; zero when omitted
        mode: ceiling, limsup-style or liminf-style lower bound
        points: restrict to these levels (e.g. a schedule subsequence)
        marks: checkpoints for the lower bounds (default dyadic); the horizon is always added

    Returns:
        BoundReport: margin trace and verdict
    """
    spec = BoundSpec(alpha, g or GrowthFunction.zero(), mode)
    saturated = prof.saturated_levels()
    if points is not None:
        wanted = set(points)
        levels = [n for n in saturated if n in wanted]
    else:
        levels = saturated
    margins = [prof.c(n) - spec.value(n) for n in levels]
    if not levels:
        return BoundReport(spec, (), (), (), 0, Verdict.INCONCLUSIVE)

    if mode is BoundMode.CEILING:
        verdict = Verdict.PASS if all(m <= 0 for m in margins) else Verdict.FAIL
        return BoundReport(spec, tuple(levels), tuple(margins), (), levels[-1], verdict)

    by_level = dict(zip(levels, margins))
    points_seen = []
    if marks is None:
        checkpoints = _checkpoints(levels)
    else:
        checkpoints = sorted({m for m in marks if m < levels[-1]} | {levels[-1]})
    for mark in checkpoints:
        if mode is BoundMode.LIMSUP:
            window = [m for n, m in by_level.items() if n <= mark]
            value = max(window) if window else None
        else:
            window = [m for n, m in by_level.items() if n >= mark]
            value = min(window) if window else None
        if value is not None:
            points_seen.append((mark, value))
    verdict = _growth_verdict([v for _, v in points_seen])
    return BoundReport(spec, tuple(levels), tuple(margins), tuple(points_seen), levels[-1], verdict)


@dataclass(frozen=True)
class MinimalCandidate:
    label: str
    period: Optional[bytes]
    status: str


def _primitive_cycles(alphabet_symbols: Sequence[int], max_period: int) -> List[bytes]:
    """Lexicographically least rotations of primitive words of length 2..max_period."""
    cycles: List[bytes] = []
    frontier = [b""]
    for length in range(1, max_period + 1):
        frontier = [w + bytes([s]) for w in frontier for s in alphabet_symbols]
        if length < 2:
            continue
        for w in frontier:
            rotations = [w[i:] + w[:i] for i in range(length)]
            if w != min(rotations) or len(set(rotations)) != length:
                continue
            cycles.append(w)
    return cycles


def minimal_candidates(table: LanguageTable, seq: Optional[SymbolicSequence] = None) -> List[MinimalCandidate]:
    """
    Periodic orbits whose words persist at every tabulated length, cross-checked
    against the minimal subsystems a generated family declares in its provenance.

    Candidates of generated families are "confirmed" when declared, "transient"
    otherwise; declared non-periodic subsystems are listed as "known". External
    data yields "heuristic" candidates.
    """
    top = table.n_max + 1
    alphabet = table.alphabet
    found: List[Tuple[str, bytes]] = []
    for s in alphabet.symbols:
        if all(bytes([s]) * n in table.words[n] for n in range(1, top + 1)):
            found.append((f"{alphabet.render(s)}^inf", bytes([s])))
    if len(alphabet) <= 8:
        for cycle in _primitive_cycles(alphabet.symbols, MAX_CANDIDATE_PERIOD):
            repeated = cycle * (top // len(cycle) + 2)
            if all(repeated[:n] in table.words[n] for n in range(1, top + 1)):
                found.append((f"({alphabet.render_word(cycle)})^inf", cycle))
    provenance = seq.provenance if seq is not None else table.provenance
    declared = set(provenance.minimal_sets)
    candidates = []
    for label, period in found:
        if not provenance.generated:
            status = "heuristic"
        else:
            status = "confirmed" if label in declared else "transient"
        candidates.append(MinimalCandidate(label, period, status))
    labels = {label for label, _ in found}
    for label in provenance.minimal_sets:
        if label not in labels:
            candidates.append(MinimalCandidate(label, None, "known"))
    return candidates


@dataclass(frozen=True)
class FactorCheck:
    n: int
    c_source: int
    c_image: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.c_source >= self.bound


def factor_preimage_check(
    source: ComplexityProfile,
    image: ComplexityProfile,
    r: int,
    i: int,
) -> List[FactorCheck]:
    """c_X(n) >= c_{π(X)}(n - r) + i n on every n > r saturated in both profiles."""
    checks = []
    for n in source.saturated_levels():
        if n <= r or not image.is_saturated(n - r):
            continue
        c_image = image.c(n - r)
        checks.append(FactorCheck(n, source.c(n), c_image, c_image + i * n))
    return checks


def census_bound(schedule: ExponentSchedule, n: int) -> int:
    """
    Upper bound on #RS(n) for the recurrent family of ``schedule``: j on
    (n_k^j + n_k^1 + L(k), n_{k+1}^1], j + 2 on (n_k^p, n_k^p + n_k^{p-1}] for
    2 <= p <= j, and j + 1 elsewhere. Where ranges overlap the larger bound applies.
    """
    if n < 1:
        raise DomainError("n must be positive")
    j = schedule.j
    in_pair = False
    in_gap = False
    k = 1
    while True:
        try:
            if schedule.entry(k, 1) >= n:
                break
        except ScheduleSearchError:
            break
        below = True
        for p in range(2, j + 1):
            previous = schedule.entry(k, p - 1)
            if previous >= n:
                below = False
                break
            current = schedule.entry(k, p)
            if current < n <= current + previous:
                in_pair = True
            if current >= n:
                below = False
                break
        if below and schedule.census_reach(k) < n:
            try:
                in_gap = in_gap or n <= schedule.entry(k + 1, 1)
            except ScheduleSearchError:
                in_gap = True
        k += 1
    if in_pair:
        return j + 2
    return j if in_gap else j + 1


def complexity_frame(
    prof: ComplexityProfile,
    census: Optional[SpecialWordReport] = None,
    report: Optional[BoundReport] = None,
) -> pd.DataFrame:
    """One row per level: n, c, and when available rs, ls and margin."""
    frame = prof.to_frame().rename(columns={"count": "c"})
    if census is not None:
        frame["rs"] = [census.rs_count(n) for n in frame["n"]]
        frame["ls"] = [census.ls_count(n) for n in frame["n"]]
    if report is not None:
        margins = dict(zip(report.levels, report.margins))
        frame["margin"] = [render_exact(margins[n]) if n in margins else None for n in frame["n"]]
    return frame
