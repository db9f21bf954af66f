"""
Empirical measures on cylinder sets, the weak metric and generic-measure probes.

Frequencies are exact ``Fraction`` values; only the weak distance is a float,
reported together with the bound on its truncated tail.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.lib.stride_tricks import sliding_window_view

from ..components.language import LanguageTable, detect_eventual_periodicity
from ..components.words import Alphabet, DomainError, Provenance, SymbolicSequence
from .complexity import ComplexityProfile, SpecialWordReport, Verdict

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 16
DEFAULT_SEARCH_SPAN = 1 << 16
DEFAULT_PROBE_TOLERANCE = 0.01
MAX_COVER_POSITIONS = 1 << 20


@dataclass(frozen=True)
class EmpiricalMeasure:
    """ν_n(x) from ``start``: counts[d][w] occurrences of w beginning in [start, start + n - 1]."""

    depth: int
    n: int
    start: int
    counts: Dict[int, Dict[bytes, int]]
    alphabet: Alphabet
    provenance: Provenance

    def freq(self, word: bytes) -> Fraction:
        if not 1 <= len(word) <= self.depth:
            raise DomainError(f"cylinder length {len(word)} is outside 1..{self.depth}")
        return Fraction(self.counts[len(word)].get(word, 0), self.n)

    def frequencies(self, d: int) -> Dict[bytes, Fraction]:
        return {w: Fraction(c, self.n) for w, c in self.counts[d].items()}

    def total(self, d: int) -> Fraction:
        return Fraction(sum(self.counts[d].values()), self.n)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for d in range(1, self.depth + 1):
            for w in sorted(self.counts[d]):
                c = self.counts[d][w]
                rows.append(
                    {
                        "word": self.alphabet.render_word(w),
                        "length": d,
                        "count": c,
                        "frequency": str(Fraction(c, self.n)),
                    }
                )
        return pd.DataFrame(rows, columns=["word", "length", "count", "frequency"])

    def as_dict(self) -> Dict[str, object]:
        return {
            "start": self.start,
            "n": self.n,
            "depth": self.depth,
            "frequencies": {
                self.alphabet.render_word(w): str(Fraction(c, self.n))
                for d in range(1, self.depth + 1)
                for w, c in sorted(self.counts[d].items())
            },
        }


def _count_words(data: np.ndarray, n: int, depth: int, alphabet: Alphabet) -> Dict[int, Dict[bytes, int]]:
    raw = data.tobytes()
    k = len(alphabet)
    lookup = np.zeros(256, dtype=np.int64)
    lookup[list(alphabet.symbols)] = np.arange(k, dtype=np.int64)
    digits = lookup[data]
    counts: Dict[int, Dict[bytes, int]] = {}
    if k ** depth < (1 << 62):
        code = np.zeros(n, dtype=np.int64)
        for d in range(1, depth + 1):
            code = code * k + digits[d - 1: d - 1 + n]
            _, first, tally = np.unique(code, return_index=True, return_counts=True)
            counts[d] = {raw[p: p + d]: int(c) for p, c in zip(first.tolist(), tally.tolist())}
        return counts
    for d in range(1, depth + 1):
        windows = sliding_window_view(data, d)[:n]
        _, first, tally = np.unique(windows, axis=0, return_index=True, return_counts=True)
        counts[d] = {raw[p: p + d]: int(c) for p, c in zip(first.tolist(), tally.tolist())}
    return counts


def empirical(seq: SymbolicSequence, start: int, n: int, depth: int) -> EmpiricalMeasure:
    """
    The empirical measure ν_n of ``seq`` read from ``start``.

    Args:
        seq: the sequence
        start: index of the first shift
        n: number of shifts averaged
        depth: longest cylinder tabulated

    Returns:
        EmpiricalMeasure: exact cylinder counts for lengths 1..depth
    """
    if depth < 1:
        raise DomainError("depth must be positive")
    if n < depth:
        raise DomainError(f"sample length {n} is shorter than the depth {depth}")
    data = seq.block(start, start + n + depth - 2)
    return EmpiricalMeasure(depth, n, start, _count_words(data, n, depth, seq.alphabet), seq.alphabet, seq.provenance)


def point_mass(period: bytes, alphabet: Alphabet, depth: int) -> EmpiricalMeasure:
    """The invariant measure on the periodic orbit of ``period`` (δ_{a^∞} for a single symbol)."""
    n = len(period) * depth
    reps = -(-(n + depth - 1) // len(period))
    data = np.frombuffer(period * reps, dtype=np.uint8)[: n + depth - 1]
    provenance = Provenance.build("periodic", {"word": alphabet.render_word(period)})
    return EmpiricalMeasure(depth, n, 0, _count_words(data, n, depth, alphabet), alphabet, provenance)


@dataclass(frozen=True)
class WeakMetricSpec:
    """Length-then-alphabet order of the nonempty words, truncated after ``truncation`` terms."""

    alphabet: Alphabet
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self) -> None:
        if self.truncation < 1:
            raise DomainError("truncation must be positive")

    def words(self) -> List[bytes]:
        out: List[bytes] = []
        length = 1
        while len(out) < self.truncation:
            for letters in product(self.alphabet.symbols, repeat=length):
                out.append(bytes(letters))
                if len(out) == self.truncation:
                    break
            length += 1
        return out

    @property
    def tail_bound(self) -> float:
        return 2.0 ** -self.truncation

    @property
    def required_depth(self) -> int:
        return len(self.words()[-1])


def weak_distance(mu: EmpiricalMeasure, nu: EmpiricalMeasure, spec: WeakMetricSpec) -> Tuple[float, float]:
    """
    Σ_{t <= T} 2^-t |μ[w_t] - ν[w_t]| over the enumeration, and the tail bound 2^-T.

    Returns:
        Tuple[float, float]: (truncated distance, tail bound)
    """
    need = spec.required_depth
    if mu.depth < need or nu.depth < need:
        raise DomainError(f"measures must be tabulated to depth {need} for truncation {spec.truncation}")
    total = Fraction(0)
    for t, w in enumerate(spec.words(), start=1):
        total += Fraction(1, 2 ** t) * abs(mu.freq(w) - nu.freq(w))
    return float(total), spec.tail_bound


@dataclass(frozen=True)
class ProbeReport:
    lengths: Tuple[int, ...]
    distances: Tuple[float, ...]
    tolerance: float
    tail_bound: float
    verdict: Verdict
    candidate: EmpiricalMeasure = field(repr=False)


def settling_verdict(distances: Sequence[float], tolerance: float, slack: Optional[float] = None) -> Verdict:
    """
    PASS when the distances fall to ``tolerance`` and stay there, never rising
    by more than ``slack`` (a quarter of the tolerance by default) between
    consecutive entries. No distances is INCONCLUSIVE.
    """
    distances = list(distances)
    if not distances:
        return Verdict.INCONCLUSIVE
    slack = tolerance / 4 if slack is None else slack
    settled = next((i for i, d in enumerate(distances) if d <= tolerance), None)
    if settled is None:
        return Verdict.FAIL
    tail = distances[settled:]
    if any(d > tolerance for d in tail):
        return Verdict.FAIL
    if any(b > a + slack for a, b in zip(tail, tail[1:])):
        return Verdict.FAIL
    return Verdict.PASS


def generic_limit_probe(
    seq: SymbolicSequence,
    lengths: Sequence[int],
    depth: int,
    spec: WeakMetricSpec,
    start: int = 0,
    tolerance: float = DEFAULT_PROBE_TOLERANCE,
) -> ProbeReport:
    """
    ν_n from a fixed start at each scheduled n, and the weak distances between
    consecutive estimates; the verdict comes from ``settling_verdict``.
    """
    lengths = list(lengths)
    if not lengths or any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise DomainError("sample lengths must be nonempty and increasing")
    estimates = [empirical(seq, start, n, depth) for n in lengths]
    distances = [weak_distance(a, b, spec)[0] for a, b in zip(estimates, estimates[1:])]
    verdict = settling_verdict(distances, tolerance)
    logger.debug("generic probe distances: %s", distances)
    return ProbeReport(tuple(lengths), tuple(distances), tolerance, spec.tail_bound, verdict, estimates[-1])


def _minimal_period(word: bytes) -> int:
    for p in range(1, len(word)):
        if word[p:] == word[:-p]:
            return p
    return len(word)


def _occurrences(data: np.ndarray, word: bytes) -> np.ndarray:
    if data.size < len(word):
        return np.empty(0, dtype=np.int64)
    windows = sliding_window_view(data, len(word))
    target = np.frombuffer(word, dtype=np.uint8)
    return np.flatnonzero((windows == target).all(axis=1))


def canonical_occurrence(data: np.ndarray, word: bytes) -> Optional[int]:
    """
    Offset of the occurrence of ``word`` whose periodic pattern continues furthest
    to the right (earliest on ties), or None.
    """
    hits = _occurrences(data, word)
    if hits.size == 0:
        return None
    p = _minimal_period(word)
    agree = np.zeros(data.size, dtype=bool)
    agree[p:] = data[p:] == data[:-p]
    # run[t] = number of consecutive agreeing positions starting at t
    stops = np.where(agree, data.size, np.arange(data.size))
    next_stop = np.minimum.accumulate(stops[::-1])[::-1]
    run = np.append(next_stop - np.arange(data.size), 0)
    ends = hits + len(word)
    stretch = np.where(ends < data.size, run[np.minimum(ends, data.size)], 0)
    return int(hits[int(np.argmax(stretch))])


@dataclass
class Cluster:
    representative: EmpiricalMeasure
    members: List[Tuple[int, bytes]]


@dataclass(frozen=True)
class ExtractionReport:
    levels: Tuple[int, ...]
    special_count: Optional[int]
    clusters: Tuple[Cluster, ...]
    threshold: float
    diagnostic: str


def _single_linkage(distance: List[List[float]], threshold: float) -> List[List[int]]:
    groups = [[i] for i in range(len(distance))]
    merged = True
    while merged:
        merged = False
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                if min(distance[x][y] for x in groups[a] for y in groups[b]) <= threshold:
                    groups[a].extend(groups.pop(b))
                    merged = True
                    break
            if merged:
                break
    return groups


def extract_generic_candidates(
    seq: SymbolicSequence,
    g: int,
    census: SpecialWordReport,
    prof: ComplexityProfile,
    depth: int,
    spec: WeakMetricSpec,
    threshold: Optional[float] = None,
    start: int = 0,
    search_span: int = DEFAULT_SEARCH_SPAN,
    levels_used: int = 3,
) -> ExtractionReport:
    """
    Candidate generic measures from the right-special words at levels n where
    #RS(n) = C < g and c(n) < 2gn.

    For each right-special word b at the last ``levels_used`` such levels (all with
    the same C as the last one), ν_n is taken from the occurrence of b in the
    search span whose periodic pattern runs longest. The measures are clustered by
    weak distance (single linkage, default threshold 8x the tail bound) and never
    more than C clusters are returned; the closest clusters are merged beyond the
    threshold when needed.
    """
    if g < 2:
        raise DomainError("g must be at least 2")
    if prof.provenance != census.provenance:
        raise DomainError("profile and census come from different tables")
    tau = threshold if threshold is not None else 8 * spec.tail_bound
    qualifying = [
        n for n in prof.saturated_levels() if census.rs_count(n) < g and prof.c(n) < 2 * g * n
    ]
    if not qualifying:
        return ExtractionReport((), None, (), tau, "no level with fewer than g right-special words and c(n) < 2gn")
    C = census.rs_count(qualifying[-1])
    chosen = [n for n in qualifying if census.rs_count(n) == C][-levels_used:]
    span = max(search_span, (2 * g + 1) * chosen[-1] + depth)
    data = seq.block(start, start + span - 1)
    measures: List[EmpiricalMeasure] = []
    labels: List[Tuple[int, bytes]] = []
    for n in chosen:
        for word in sorted(census.right[n]):
            offset = canonical_occurrence(data, word)
            if offset is None:
                logger.warning("right-special word of length %d not found in the search span", n)
                continue
            measures.append(empirical(seq, start + offset, max(n, depth), depth))
            labels.append((n, word))
    if not measures:
        return ExtractionReport(tuple(chosen), C, (), tau, "right-special words do not occur in the search span")
    distance = [[weak_distance(a, b, spec)[0] for b in measures] for a in measures]
    groups = _single_linkage(distance, tau)
    while len(groups) > C:
        best = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                d = min(distance[x][y] for x in groups[a] for y in groups[b])
                if best is None or d < best[0]:
                    best = (d, a, b)
        assert best is not None
        logger.warning("merging clusters at distance %.3g above threshold %.3g", best[0], tau)
        groups[best[1]].extend(groups.pop(best[2]))
    clusters = []
    for group in groups:
        top = max(group, key=lambda idx: (labels[idx][0], -idx))
        clusters.append(Cluster(measures[top], [labels[idx] for idx in group]))
    diagnostic = f"levels {chosen} with C = {C}; aperiodicity checked only within the search span of {span} symbols"
    return ExtractionReport(tuple(chosen), C, tuple(clusters), tau, diagnostic)


@dataclass(frozen=True)
class CoverCheck:
    n: int
    length: int
    windows: int
    counterexample: Optional[str]

    @property
    def holds(self) -> bool:
        return self.counterexample is None


@dataclass(frozen=True)
class CoverReport:
    checks: Tuple[CoverCheck, ...]
    skipped: Optional[str] = None


def rs_window_cover_check(
    table: LanguageTable,
    prof: ComplexityProfile,
    seq: SymbolicSequence,
    census: SpecialWordReport,
    max_n: int = 30,
    max_positions: int = MAX_COVER_POSITIONS,
) -> CoverReport:
    """
    Every subword of length c(n) + n of the window contains a right-special
    n-word, for each saturated n <= max_n. The window is read from the sequence
    itself; eventually periodic inputs are skipped.
    """
    periodic = detect_eventual_periodicity(seq, "right", min(table.width, 1 << 14))
    if periodic is not None:
        reason = f"eventually periodic to the right (period {periodic.period} from {periodic.onset})"
        return CoverReport((), reason)
    lo, hi = table.window
    first = seq.first_index
    if first is not None:
        lo = max(lo, first)
    if seq.last_index is not None:
        hi = min(hi, seq.last_index)
    hi = min(hi, lo + max_positions - 1)
    data = seq.block(lo, hi)
    checks = []
    for n in prof.saturated_levels():
        if n > max_n:
            break
        length = prof.c(n) + n
        if data.size < length:
            continue
        hit = np.zeros(data.size - n + 1, dtype=bool)
        for word in census.right[n]:
            hit[_occurrences(data, word)] = True
        prefix = np.concatenate(([0], np.cumsum(hit)))
        starts = np.arange(data.size - length + 1)
        inside = prefix[starts + length - n + 1] - prefix[starts]
        missing = np.flatnonzero(inside == 0)
        example = None
        if missing.size:
            s = int(missing[0])
            example = seq.alphabet.render_word(data[s: s + length].tobytes())
            logger.warning("window at %d of length %d holds no right-special %d-word", lo + s, length, n)
        checks.append(CoverCheck(n, length, int(starts.size), example))
    return CoverReport(tuple(checks))


def shift_average_check(seq: SymbolicSequence, m: int, n: int, depth: int, start: int = 0) -> Fraction:
    """
    Largest deviation over cylinders of (m+n)ν_{m+n}(x) - mν_m(x) - nν_n(σ^m x),
    as a fraction of m + n.
    """
    whole = empirical(seq, start, m + n, depth)
    head = empirical(seq, start, m, depth)
    tail = empirical(seq, start + m, n, depth)
    worst = 0
    for d in range(1, depth + 1):
        words = set(whole.counts[d]) | set(head.counts[d]) | set(tail.counts[d])
        for w in words:
            gap = whole.counts[d].get(w, 0) - head.counts[d].get(w, 0) - tail.counts[d].get(w, 0)
            worst = max(worst, abs(gap))
    return Fraction(worst, m + n)


@dataclass(frozen=True)
class ErgodicityProbe:
    ratio: Fraction
    applicable: bool
    largest_distance: float
    tail_bound: float


def ergodicity_probe(
    seq: SymbolicSequence,
    prof: ComplexityProfile,
    starts: Iterable[int],
    length: int,
    depth: int,
    spec: WeakMetricSpec,
) -> ErgodicityProbe:
    """
    When max c(n)/n over the upper half of the saturated levels stays below 3,
    compare ν_length from several starts; a small spread is consistent with a
    single generic measure.
    """
    levels = prof.saturated_levels()
    upper = levels[len(levels) // 2:] or levels
    ratio = max((Fraction(prof.c(n), n) for n in upper), default=Fraction(0))
    measures = [empirical(seq, s, length, depth) for s in starts]
    spread = 0.0
    for a in range(len(measures)):
        for b in range(a + 1, len(measures)):
            spread = max(spread, weak_distance(measures[a], measures[b], spec)[0])
    return ErgodicityProbe(ratio, bool(levels) and ratio < 3, spread, spec.tail_bound)
