"""
The run-length sequence families and their language views.

Every family is a ``TwoSidedSequence``: a right-infinite left half (read from
the origin outwards) glued to a lazily segmented right half. Because runs grow
without bound, each family also knows a *language view*: the same point with
every run longer than the word length of interest clipped, which has the same
short words but becomes periodic after a short prefix.
"""
from __future__ import annotations

import logging
from decimal import Decimal
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from ..components.language import window_counts
from ..components.words import (
    Alphabet,
    DomainError,
    EventuallyPeriodicSequence,
    PeriodicSequence,
    Provenance,
    ReversedSequence,
    Segment,
    SegmentedSequence,
    SequenceKind,
    SymbolicSequence,
    TwoSidedSequence,
    restrict_right,
)
from .schedule import ChainLengths, ExponentSchedule, GrowthFunction, RunLengthSchedule, make_schedule, ruler
from .sturmian import (
    SturmianParams,
    SturmianSequence,
    band_slope,
    characteristic_word,
    sturmian,
    sturmian_language,
)

logger = logging.getLogger(__name__)

STAIRCASE_PREFIX = "011000111100000111111"
MAX_VIEW_GENERATION = 24

ViewBuilder = Callable[[int], Tuple[SymbolicSequence, Tuple[int, int]]]
MinimalLanguages = Callable[[int], List[FrozenSet[bytes]]]


class FamilySequence(TwoSidedSequence):
    """
    A generated two-sided point that knows its clipped language views and the
    languages of its minimal subsystems.
    """

    def __init__(
        self,
        left: SymbolicSequence,
        right: SymbolicSequence,
        alphabet: Alphabet,
        provenance: Provenance,
        view: ViewBuilder,
        minimal: MinimalLanguages,
        schedule: Optional[object] = None,
        sturmians: Sequence[SturmianParams] = (),
    ) -> None:
        super().__init__(left, right, alphabet, provenance)
        self.schedule = schedule
        self.sturmians = tuple(sturmians)
        self._view = view
        self._minimal = minimal
        self._views: Dict[int, Tuple[SymbolicSequence, Tuple[int, int]]] = {}

    def _view_for(self, limit: int) -> Tuple[SymbolicSequence, Tuple[int, int]]:
        if limit not in self._views:
            self._views[limit] = self._view(limit)
            view, horizon = self._views[limit]
            logger.debug("%s: language view for words <= %d, horizon %s", self.provenance.family, limit, horizon)
        return self._views[limit]

    def language_view(self, limit: int) -> SymbolicSequence:
        return self._view_for(limit)[0]

    def language_horizon(self, limit: int) -> Optional[Tuple[int, int]]:
        return self._view_for(limit)[1]

    def minimal_languages(self, r: int) -> Optional[List[FrozenSet[bytes]]]:
        return self._minimal(r)


class _View(TwoSidedSequence):
    """A clipped view; it is its own language view."""

    def __init__(self, left: SymbolicSequence, right: SymbolicSequence, alphabet: Alphabet, provenance: Provenance,
                 horizon: Tuple[int, int]) -> None:
        super().__init__(left, right, alphabet, provenance, horizon_hint=lambda limit: horizon)


def _constant_left(symbol: int, alphabet: Alphabet) -> PeriodicSequence:
    return PeriodicSequence(bytes([symbol]), alphabet, SequenceKind.RIGHT_INFINITE)


def _constant_languages(symbols: Sequence[int]) -> MinimalLanguages:
    return lambda r: [frozenset({bytes([s]) * r}) for s in symbols]


def _periodic_view(
    left: SymbolicSequence,
    left_need: int,
    middle: bytes,
    period: bytes,
    alphabet: Alphabet,
    provenance: Provenance,
    limit: int,
) -> Tuple[SymbolicSequence, Tuple[int, int]]:
    right = EventuallyPeriodicSequence(middle, period, alphabet, provenance)
    horizon = (-left_need, len(middle) + 2 * len(period) + limit)
    return _View(left, right, alphabet, provenance, horizon), horizon


def _sturmian_reach(seq: SymbolicSequence, limit: int) -> int:
    """Length of a prefix of a right-infinite Sturmian reading that holds all its ``limit``-words."""
    m = max(4 * limit, 64)
    while window_counts(seq.block(0, m - 1), limit)[limit - 1] < limit + 1:
        m *= 2
    return m


class _RunLetters:
    """
    How each letter of an exponent schedule is written out: plain letters as
    constant runs, stitched letters as palindromic prefixes of a characteristic word.
    """

    def __init__(self, schedule: ExponentSchedule, stitched: Dict[int, SturmianParams]) -> None:
        self.schedule = schedule
        self.words: Dict[int, SturmianSequence] = {p: characteristic_word(params) for p, params in stitched.items()}
        self.chains: Dict[int, ChainLengths] = {p: ChainLengths(params) for p, params in stitched.items()}

    def segment(self, p: int, length: int) -> Segment:
        source = self.words.get(p)
        if source is None:
            return Segment(length, symbol=p)
        return Segment(length, source=source)

    def segments(self) -> Iterator[Segment]:
        t = 1
        while True:
            k = ruler(t)
            for p in range(1, self.schedule.j + 1):
                yield self.segment(p, self.schedule.entry(k, p))
            t += 1

    def clip_thresholds(self, limit: int) -> Dict[int, Tuple[int, int]]:
        """For each stitched letter: (threshold T, clipped length) at word length ``limit``."""
        clips = {}
        for p, word in self.words.items():
            threshold = max(limit, word.covering_length(limit))
            clips[p] = threshold, self.chains[p].least_at_least(threshold)
        return clips

    def clipped(self, p: int, length: Optional[int], limit: int, clips: Dict[int, Tuple[int, int]]) -> bytes:
        """The run of letter p with ``length`` (None: beyond every threshold) clipped for ``limit``."""
        if p in clips:
            threshold, short = clips[p]
            size = short if length is None or length >= threshold else length
            return self.words[p].block(0, size - 1).tobytes()
        size = limit if length is None else min(length, limit)
        return bytes([p]) * size

    def view_period(self, limit: int) -> Tuple[bytes, int]:
        """
        The clipped right half is (U B)^∞: B is any generation whose runs all
        exceed the thresholds and U covers the ruler positions before the first
        such generation recurs.
        """
        clips = self.clip_thresholds(limit)
        threshold = max([limit] + [t for t, _ in clips.values()])
        kb = 1
        while self.schedule.entry(kb, 1) < threshold:
            kb += 1
            if kb > MAX_VIEW_GENERATION:
                raise DomainError(f"schedule grows too slowly to clip at word length {limit}")
        j = self.schedule.j
        big = b"".join(self.clipped(p, None, limit, clips) for p in range(1, j + 1))
        blocks: Dict[int, bytes] = {}
        head = []
        for t in range(1, 1 << (kb - 1)):
            k = ruler(t)
            if k not in blocks:
                blocks[k] = b"".join(self.clipped(p, self.schedule.entry(k, p), limit, clips) for p in range(1, j + 1))
            head.append(blocks[k])
        return b"".join(head) + big, kb


def recurrent_sharp_family(schedule: ExponentSchedule) -> FamilySequence:
    """
    x = j^∞ . B_{ω_1} B_{ω_2} B_{ω_3} ... with B_k = 1^{n_k^1} 2^{n_k^2} ... j^{n_k^j}
    and ω the ruler sequence.

    Args:
        schedule: exponent schedule with no stitched letters

    Returns:
        FamilySequence: bi-infinite point over {1..j}
    """
    if schedule.i != 0:
        raise DomainError("the recurrent family needs a schedule with i = 0; use stitched_family")
    j = schedule.j
    alphabet = Alphabet.integers(1, j)
    provenance = Provenance.build(
        "recurrent",
        schedule.describe(),
        minimal_sets=tuple(f"{p}^inf" for p in range(1, j + 1)),
    )
    letters = _RunLetters(schedule, {})
    left = _constant_left(j, alphabet)
    right = SegmentedSequence(letters.segments, alphabet, provenance)

    def view(limit: int) -> Tuple[SymbolicSequence, Tuple[int, int]]:
        period, kb = letters.view_period(limit)
        logger.debug("recurrent view: generation %d clips at %d, period %d", kb, limit, len(period))
        return _periodic_view(left, limit, b"", period, alphabet, provenance, limit)

    return FamilySequence(left, right, alphabet, provenance, view, _constant_languages(range(1, j + 1)), schedule)


def _check_stitch_alphabets(j: int, i: int, sturmians: Sequence[SturmianParams]) -> Alphabet:
    alphabet = Alphabet.integers(1, j - i) if j > i else None
    for params in sturmians:
        extra = params.alphabet()
        if alphabet is None:
            alphabet = extra
            continue
        try:
            alphabet = alphabet.union(extra)
        except DomainError:
            raise DomainError("stitched Sturmian alphabets must be disjoint from each other and from 1..j-i") from None
    assert alphabet is not None
    return alphabet


def stitched_family(
    schedule: ExponentSchedule,
    sturmians: Optional[Sequence[SturmianParams]] = None,
) -> FamilySequence:
    """
    The recurrent family with each run p^{n_k^p} of a stitched letter p replaced
    by the palindromic prefix w_k^p of length n_k^p of the characteristic word of
    its Sturmian. Every w_k^p is a prefix and a suffix of w_{k+1}^p; the left tail
    is the left-infinite limit of the w_k^j.

    When ``sturmians`` differ from the ones the schedule was inflated for, the
    schedule is regenerated for them.
    """
    if schedule.i < 1:
        raise DomainError("stitched_family needs a schedule with i >= 1")
    if sturmians is None:
        sturmians = schedule.sturmians
    sturmians = tuple(sturmians)
    if sturmians != schedule.sturmians:
        logger.info("regenerating the schedule for the supplied Sturmian slopes")
        schedule = make_schedule(schedule.j, schedule.i, schedule.g, schedule.margin, sturmians)
    j, i = schedule.j, schedule.i
    alphabet = _check_stitch_alphabets(j, i, sturmians)
    stitched = dict(zip(schedule.stitched_letters, sturmians))
    params = schedule.describe()
    params["sturmians"] = [s.describe() for s in sturmians]
    provenance = Provenance.build(
        "stitched",
        params,
        minimal_sets=tuple(f"{p}^inf" for p in range(1, j - i + 1))
        + tuple(f"sturmian(beta={format(s.beta, '.12f')})" for s in sturmians),
    )
    letters = _RunLetters(schedule, stitched)
    left = letters.words[j]
    right = SegmentedSequence(letters.segments, alphabet, provenance)

    def view(limit: int) -> Tuple[SymbolicSequence, Tuple[int, int]]:
        period, kb = letters.view_period(limit)
        need = left.covering_length(limit) + limit
        return _periodic_view(left, need, b"", period, alphabet, provenance, limit)

    def minimal(r: int) -> List[FrozenSet[bytes]]:
        return _constant_languages(range(1, j - i + 1))(r) + [sturmian_language(s, r) for s in sturmians]

    return FamilySequence(left, right, alphabet, provenance, view, minimal, schedule, sturmians)


def transitive_family(j: int, g: GrowthFunction, margin: int = 1) -> FamilySequence:
    """
    x = 0^∞ . 1^{n_1} 2^{n_2} ... (j-1)^{n_{j-1}} 1^{n_j} 2^{n_{j+1}} ...

    Runs cycle through 1..j-1 with the lengths of a ``RunLengthSchedule``.
    """
    if j < 3:
        raise DomainError("the transitive family needs j >= 3")
    schedule = RunLengthSchedule(g, margin)
    alphabet = Alphabet.integers(0, j - 1)
    params = dict(schedule.describe(), j=j)
    provenance = Provenance.build("transitive", params, minimal_sets=tuple(f"{p}^inf" for p in range(j)))

    def symbol(k: int) -> int:
        return (k - 1) % (j - 1) + 1

    def segments() -> Iterator[Segment]:
        k = 1
        while True:
            yield Segment(schedule.entry(k), symbol=symbol(k))
            k += 1

    left = _constant_left(0, alphabet)
    right = SegmentedSequence(segments, alphabet, provenance)

    def view(limit: int) -> Tuple[SymbolicSequence, Tuple[int, int]]:
        k = 1
        middle = []
        while schedule.entry(k) < limit:
            middle.append(bytes([symbol(k)]) * schedule.entry(k))
            k += 1
        period = b"".join(bytes([symbol(k + q)]) * limit for q in range(j - 1))
        return _periodic_view(left, limit, b"".join(middle), period, alphabet, provenance, limit)

    return FamilySequence(left, right, alphabet, provenance, view, _constant_languages(range(j)), schedule)


def _band_params(beta: Decimal, N: int) -> SturmianParams:
    if not Decimal(1) / (N + 1) < beta < Decimal(1) / N:
        raise DomainError(f"beta = {beta} must lie in (1/{N + 1}, 1/{N})")
    return SturmianParams(beta)


def _first_run_end(z: SymbolicSequence, N: int) -> int:
    """First index t >= N with z[t-N..t-1] = 0^N and z[t] = 1."""
    chunk = max(4096, 8 * (N + 2))
    lo = 0
    while True:
        data = z.block(lo, lo + chunk - 1)
        ones = data.nonzero()[0]
        for a, b in zip(ones[:-1].tolist(), ones[1:].tolist()):
            if b - a - 1 == N:
                return lo + b
        lo += chunk - 2 * (N + 2)


def nonrecurrent_example(
    case: str,
    N: int,
    betas: Optional[Sequence[Decimal]] = None,
) -> FamilySequence:
    """
    The two nonrecurrent witnesses with exact complexity.

    Case ``i1``: x = 0^∞ . s with s a right-infinite Sturmian word of slope in
    (1/(N+1), 1/N) that starts with a 1 preceded by exactly N zeros.
    Case ``i2``: x = r . s with r a left-infinite word of Z1 ending in 1 and s a
    right-infinite word of Z2 beginning with 1, for two distinct slopes in that band.

    Args:
        case: "i1" or "i2"
        N: band index, N > 3
        betas: one slope (i1) or two distinct slopes (i2); band defaults otherwise

    Returns:
        FamilySequence: bi-infinite point over {0, 1}
    """
    if N <= 3:
        raise DomainError("N must exceed 3")
    alphabet = Alphabet.integers(0, 1)
    if case == "i1":
        params = _band_params(Decimal(betas[0]) if betas else band_slope(N, "golden"), N)
        z = sturmian(params)
        t = _first_run_end(z, N)
        right = restrict_right(z, t)
        left = _constant_left(0, alphabet)
        provenance = Provenance.build(
            "nonrecurrent-i1", {"N": N, "start": t, "sturmian": params.describe()},
            minimal_sets=("0^inf", f"sturmian(beta={format(params.beta, '.12f')})"),
        )
        sturmians = [params]
        minimal: MinimalLanguages = lambda r: [frozenset({bytes(r)}), sturmian_language(params, r)]
    elif case == "i2":
        if betas is None:
            betas = (band_slope(N, "golden"), band_slope(N, "silver"))
        if len(betas) != 2 or Decimal(betas[0]) == Decimal(betas[1]):
            raise DomainError("case i2 needs two distinct slopes")
        first, second = (_band_params(Decimal(b), N) for b in betas)
        z1, z2 = sturmian(first), sturmian(second)
        t1 = _first_run_end(z1, N)
        t2 = _first_run_end(z2, N)
        left = ReversedSequence(z1, t1)
        right = restrict_right(z2, t2)
        provenance = Provenance.build(
            "nonrecurrent-i2",
            {"N": N, "pivot": t1, "start": t2, "z1": first.describe(), "z2": second.describe()},
            minimal_sets=tuple(f"sturmian(beta={format(p.beta, '.12f')})" for p in (first, second)),
        )
        sturmians = [first, second]
        minimal = lambda r: [sturmian_language(first, r), sturmian_language(second, r)]
    else:
        raise DomainError(f"case must be 'i1' or 'i2', got {case!r}")

    def view(limit: int) -> Tuple[SymbolicSequence, Tuple[int, int]]:
        left_need = _sturmian_reach(left, limit) + limit if case == "i2" else limit + 1
        horizon = (-left_need, _sturmian_reach(right, limit) + limit)
        return _View(left, right, alphabet, provenance, horizon), horizon

    return FamilySequence(left, right, alphabet, provenance, view, minimal, sturmians=sturmians)


def staircase() -> FamilySequence:
    """x = 0^∞ . 0 11 000 1111 00000 ...: block m has length m and symbol (m+1) mod 2."""
    alphabet = Alphabet.integers(0, 1)
    provenance = Provenance.build("staircase", {}, minimal_sets=("0^inf", "1^inf"))

    def segments() -> Iterator[Segment]:
        m = 1
        while True:
            yield Segment(m, symbol=(m + 1) % 2)
            m += 1

    left = _constant_left(0, alphabet)
    right = SegmentedSequence(segments, alphabet, provenance)

    def view(limit: int) -> Tuple[SymbolicSequence, Tuple[int, int]]:
        middle = b"".join(bytes([(m + 1) % 2]) * m for m in range(1, limit))
        period = bytes([(limit + 1) % 2]) * limit + bytes([limit % 2]) * limit
        return _periodic_view(left, limit, middle, period, alphabet, provenance, limit)

    return FamilySequence(left, right, alphabet, provenance, view, _constant_languages((0, 1)))


def periodic(word: bytes, alphabet: Alphabet) -> PeriodicSequence:
    """The bi-infinite periodic point ...www.www..."""
    return PeriodicSequence(word, alphabet)


def from_tails(left: bytes, right: bytes, alphabet: Alphabet, middle: bytes = b"") -> TwoSidedSequence:
    """
    u^∞ . m v^∞: ``left`` repeats to the left of the origin, ``middle`` sits at
    index 0 and ``right`` repeats after it.
    """
    if not left or not right:
        raise DomainError("both tails need a nonempty period")
    provenance = Provenance.build(
        "tails",
        {"left": alphabet.render_word(left), "middle": alphabet.render_word(middle), "right": alphabet.render_word(right)},
    )
    reach = len(left) + len(middle) + 2 * len(right)
    return TwoSidedSequence(
        PeriodicSequence(left[::-1], alphabet, SequenceKind.RIGHT_INFINITE),
        EventuallyPeriodicSequence(middle, right, alphabet, provenance),
        alphabet,
        provenance,
        horizon_hint=lambda limit: (-(limit + len(left)), reach + limit),
    )
