"""
Language tables of sequence windows.

The words of a window are read off a suffix ordering built by prefix doubling
(numpy); adjacent common-prefix lengths give every level's word count in one
pass, so window saturation can be tested cheaply before the final table with
its word sets and extension sets is materialised.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

import numpy as np

from .words import (
    Alphabet,
    DomainError,
    Provenance,
    SequenceKind,
    SymbolicSequence,
    Word,
)

logger = logging.getLogger(__name__)

DEFAULT_CAP = 1 << 26
DEFAULT_INITIAL_WINDOW = 1024

WordKey = bytes


@dataclass(frozen=True)
class SaturationPolicy:
    """How windows grow while a language table is being certified."""

    initial_window: int = DEFAULT_INITIAL_WINDOW
    cap: int = DEFAULT_CAP
    use_language_view: bool = True

    def __post_init__(self) -> None:
        if self.initial_window < 1:
            raise DomainError("initial window must be positive")
        if self.cap < 2:
            raise DomainError("window cap must be at least 2 symbols")


@dataclass(frozen=True)
class LanguageTable:
    """
    Words of a window of a sequence, level by level.

    ``words`` and ``saturated`` hold levels 1..n_max+1; the extra level makes
    the extension sets of n_max-words exact.
    """

    window: Tuple[int, int]
    n_max: int
    words: Dict[int, FrozenSet[WordKey]]
    right_ext: Dict[WordKey, FrozenSet[int]]
    left_ext: Dict[WordKey, FrozenSet[int]]
    saturated: Dict[int, bool]
    alphabet: Alphabet
    provenance: Provenance
    clipped_at: Optional[int] = None
    doublings: int = 0
    counts_by_window: Tuple[Tuple[int, ...], ...] = field(default=(), repr=False)

    def count(self, n: int) -> int:
        return len(self.words[n])

    def is_saturated(self, n: int) -> bool:
        return self.saturated.get(n, False)

    def sorted_words(self, n: int) -> List[Word]:
        """Words of length n in canonical (alphabet) order."""
        order = {s: i for i, s in enumerate(self.alphabet.symbols)}
        keys = sorted(self.words[n], key=lambda w: [order[s] for s in w])
        return [Word(k) for k in keys]

    def right_extensions(self, word: Union[Word, WordKey]) -> FrozenSet[int]:
        key = word.symbols if isinstance(word, Word) else word
        return self.right_ext.get(key, frozenset())

    def left_extensions(self, word: Union[Word, WordKey]) -> FrozenSet[int]:
        key = word.symbols if isinstance(word, Word) else word
        return self.left_ext.get(key, frozenset())

    def __contains__(self, word: object) -> bool:
        key = word.symbols if isinstance(word, Word) else word
        if not isinstance(key, bytes) or not 1 <= len(key) <= self.n_max + 1:
            return False
        return key in self.words[len(key)]

    @property
    def width(self) -> int:
        return self.window[1] - self.window[0] + 1


def _sort_suffixes(data: np.ndarray, depth: int) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Order window positions by their first ``depth`` symbols.

    Returns the order and the rank arrays of every doubling round; round t
    ranks positions by their first 2**t symbols (running off the end sorts
    first).
    """
    size = data.size
    rank = data.astype(np.int64)
    levels = [rank]
    base = max(size, 256) + 2
    span = 1
    while span < depth:
        ahead = np.full(size, -1, dtype=np.int64)
        if span < size:
            ahead[: size - span] = rank[span:]
        _, inverse = np.unique(rank * base + (ahead + 1), return_inverse=True)
        rank = inverse.reshape(-1).astype(np.int64)
        levels.append(rank)
        span *= 2
    order = np.argsort(rank, kind="stable")
    return order, levels


def _adjacent_lcp(order: np.ndarray, levels: List[np.ndarray], cap: int) -> np.ndarray:
    """Common-prefix length of each suffix with its predecessor in ``order``, capped at ``cap``."""
    size = order.size
    lcp = np.zeros(size, dtype=np.int64)
    if size < 2:
        return lcp
    a = order[:-1].astype(np.int64)
    b = order[1:].astype(np.int64)
    found = np.zeros(size - 1, dtype=np.int64)
    for t in range(len(levels) - 1, -1, -1):
        rank = levels[t]
        pa = a + found
        pb = b + found
        inside = (pa < size) & (pb < size)
        pa = np.minimum(pa, size - 1)
        pb = np.minimum(pb, size - 1)
        same = inside & (rank[pa] == rank[pb])
        found += np.where(same, 1 << t, 0)
    lcp[1:] = np.minimum(found, cap)
    return lcp


def _level_counts(order: np.ndarray, lcp: np.ndarray, depth: int) -> np.ndarray:
    """counts[n-1] = number of distinct n-words of the window, n = 1..depth."""
    size = order.size
    lengths = np.minimum(size - order.astype(np.int64), depth)
    first = lcp + 1
    valid = first <= lengths
    up = np.bincount(first[valid], minlength=depth + 2)
    down = np.bincount(lengths[valid] + 1, minlength=depth + 2)
    return np.cumsum(up - down)[1: depth + 1]


@dataclass
class _WindowScan:
    lo: int
    hi: int
    data: np.ndarray
    order: np.ndarray
    lcp: np.ndarray
    counts: np.ndarray


def _scan(source: SymbolicSequence, lo: int, hi: int, depth: int) -> _WindowScan:
    data = source.block(lo, hi)
    order, levels = _sort_suffixes(data, depth)
    lcp = _adjacent_lcp(order, levels, depth)
    counts = _level_counts(order, lcp, depth)
    return _WindowScan(lo, hi, data, order, lcp, counts)


def window_counts(data: np.ndarray, depth: int) -> List[int]:
    """Distinct-word counts of a raw symbol array for lengths 1..depth."""
    data = np.ascontiguousarray(data, dtype=np.uint8)
    order, levels = _sort_suffixes(data, depth)
    lcp = _adjacent_lcp(order, levels, depth)
    return [int(c) for c in _level_counts(order, lcp, depth)]


def factors_of(data: Union[bytes, np.ndarray], n: int) -> Set[bytes]:
    """All distinct n-words of a finite word (brute force; used for small checks)."""
    raw = data.tobytes() if isinstance(data, np.ndarray) else data
    return {raw[p: p + n] for p in range(len(raw) - n + 1)}


def _clip(source: SymbolicSequence, lo: int, hi: int) -> Tuple[int, int]:
    first, last = source.first_index, source.last_index
    if first is not None:
        lo = max(lo, first)
    if last is not None:
        hi = min(hi, last)
    return lo, hi


def _initial_window(source: SymbolicSequence, depth: int, policy: SaturationPolicy) -> Tuple[int, int]:
    w0 = policy.initial_window
    if source.kind is SequenceKind.RIGHT_INFINITE:
        lo, hi = 0, w0
    else:
        lo, hi = -w0, w0
    hint = source.language_horizon(depth)
    if hint is not None:
        lo, hi = min(lo, hint[0]), max(hi, hint[1])
    lo, hi = _clip(source, lo, hi)
    if hi - lo + 1 > policy.cap:
        logger.warning("initial window [%d, %d] exceeds the cap; truncating to %d symbols", lo, hi, policy.cap)
        hi = lo + policy.cap - 1
    return lo, hi


def _grow(source: SymbolicSequence, lo: int, hi: int, cap: int) -> Optional[Tuple[int, int]]:
    width = hi - lo + 1
    if width >= cap:
        return None
    extra = min(width, cap - width)
    if source.first_index is None:
        new_lo, new_hi = lo - extra // 2, hi + extra - extra // 2
    else:
        new_lo, new_hi = lo, hi + extra
    new_lo, new_hi = _clip(source, new_lo, new_hi)
    if (new_lo, new_hi) == (lo, hi):
        return None
    return new_lo, new_hi


def _materialise(scan: _WindowScan, depth: int) -> Dict[int, FrozenSet[WordKey]]:
    size = scan.order.size
    lengths = size - scan.order.astype(np.int64)
    raw = scan.data.tobytes()
    words: Dict[int, FrozenSet[WordKey]] = {}
    for n in range(1, depth + 1):
        starts = scan.order[(scan.lcp < n) & (lengths >= n)]
        words[n] = frozenset(raw[p: p + n] for p in starts.tolist())
    return words


def _extensions(
    words: Dict[int, FrozenSet[WordKey]], n_max: int
) -> Tuple[Dict[WordKey, FrozenSet[int]], Dict[WordKey, FrozenSet[int]]]:
    right: Dict[WordKey, Set[int]] = {}
    left: Dict[WordKey, Set[int]] = {}
    for n in range(1, n_max + 1):
        for w in words[n]:
            right[w] = set()
            left[w] = set()
        for u in words[n + 1]:
            right[u[:-1]].add(u[-1])
            left[u[1:]].add(u[0])
    return (
        {w: frozenset(s) for w, s in right.items()},
        {w: frozenset(s) for w, s in left.items()},
    )


def build_language(
    seq: SymbolicSequence,
    n_max: int,
    window_policy: Optional[SaturationPolicy] = None,
) -> LanguageTable:
    """
    Tabulate the words of a growing window of ``seq`` up to length n_max.

    The window doubles until the word count of every level 1..n_max+1 is
    unchanged across one doubling, or until the cap stops it. Levels whose
    count still moved in the last doubling are flagged unsaturated.

    Args:
        seq: the sequence (a transitive point of its orbit closure)
        n_max: longest word length of interest
        window_policy: growth policy; defaults to ``SaturationPolicy()``

    Returns:
        LanguageTable: words, extension sets and per-level saturation flags
    """
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    policy = window_policy or SaturationPolicy()
    depth = n_max + 1
    source = seq.language_view(depth) if policy.use_language_view else seq
    clipped_at = depth if source is not seq else None

    lo, hi = _initial_window(source, depth, policy)
    scan = _scan(source, lo, hi, depth)
    history = [tuple(int(c) for c in scan.counts)]
    previous: Optional[np.ndarray] = None
    doublings = 0
    while previous is None or not np.array_equal(previous, scan.counts):
        grown = _grow(source, scan.lo, scan.hi, policy.cap)
        if grown is None:
            break
        previous = scan.counts
        scan = _scan(source, grown[0], grown[1], depth)
        history.append(tuple(int(c) for c in scan.counts))
        doublings += 1
        logger.debug("window [%d, %d]: c(n_max+1) = %d", scan.lo, scan.hi, int(scan.counts[-1]))

    if previous is None and scan.hi - scan.lo + 1 >= 4:
        # The window could not grow at all (short finite data): compare with its first half.
        half = _scan(source, scan.lo, scan.lo + (scan.hi - scan.lo + 1) // 2 - 1, depth)
        previous = half.counts

    if previous is None:
        saturated = {n: False for n in range(1, depth + 1)}
    else:
        saturated = {n: bool(previous[n - 1] == scan.counts[n - 1]) for n in range(1, depth + 1)}
    unsaturated = [n for n, flag in saturated.items() if not flag]
    if unsaturated:
        logger.warning(
            "%s: %d of %d levels unsaturated in window [%d, %d] (first %d)",
            seq.provenance.family, len(unsaturated), depth, scan.lo, scan.hi, unsaturated[0],
        )

    words = _materialise(scan, depth)
    right_ext, left_ext = _extensions(words, n_max)
    return LanguageTable(
        window=(scan.lo, scan.hi),
        n_max=n_max,
        words=words,
        right_ext=right_ext,
        left_ext=left_ext,
        saturated=saturated,
        alphabet=seq.alphabet,
        provenance=seq.provenance,
        clipped_at=clipped_at,
        doublings=doublings,
        counts_by_window=tuple(history),
    )


@dataclass(frozen=True)
class Periodicity:
    """x_i = x_{i+p} for every tested i past the onset (reading away from the origin)."""

    period: int
    onset: int
    direction: str
    horizon: int


def detect_eventual_periodicity(
    seq: SymbolicSequence,
    direction: str,
    horizon: int,
    min_repeats: int = 4,
) -> Optional[Periodicity]:
    """
    Look for an eventually periodic tail within a finite horizon.

    Reading to the right uses x_0 .. x_{horizon-1}; reading to the left uses
    x_{-1}, x_{-2}, ... so onsets are distances from the origin. A candidate
    (p, N) needs p <= horizon/2, N <= horizon/2 and at least ``min_repeats``
    full periods between N and the horizon. None means nothing was found
    inside the horizon, not that the sequence is aperiodic.
    """
    if horizon < 2:
        raise DomainError("horizon must be at least 2")
    if direction == "left":
        if seq.kind is not SequenceKind.BI_INFINITE:
            raise DomainError("reading to the left needs a bi-infinite sequence")
        first = seq.first_index
        reach = horizon if first is None else min(horizon, -first)
        if reach < 2:
            return None
        data = seq.block(-reach, -1)[::-1]
    elif direction == "right":
        last = seq.last_index
        reach = horizon if last is None else min(horizon, last + 1)
        if reach < 2:
            return None
        data = seq.block(0, reach - 1)
    else:
        raise DomainError(f"direction must be 'left' or 'right', got {direction!r}")

    half = reach // 2
    for p in range(1, half + 1):
        mismatch = np.flatnonzero(data[:-p] != data[p:])
        onset = int(mismatch[-1]) + 1 if mismatch.size else 0
        if onset <= half and reach - onset >= min_repeats * p:
            return Periodicity(p, onset, direction, reach)
    return None
