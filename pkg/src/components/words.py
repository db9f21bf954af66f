"""
Alphabets, words and lazily evaluated symbolic sequences.

Every sequence is read through ``block(lo, hi)``, which returns the symbols at
the inclusive index range ``[lo, hi]`` as a ``numpy.uint8`` array. Concrete
sequence classes implement ``_fill`` only; range checks, the shift action and
word extraction live here.
"""
from __future__ import annotations

import bisect
import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Tuple,
    Union,
)

import numpy as np

logger = logging.getLogger(__name__)

MAX_ALPHABET = 255
MAX_INDEX = 1 << 62

HorizonHint = Callable[[int], Optional[Tuple[int, int]]]


class DomainError(ValueError):
    """Raised when an operation is called outside its documented domain."""


@dataclass(frozen=True)
class Alphabet:
    """
    Ordered finite set of symbol identifiers with printable renderings.

    Symbols are small integers (they are stored as bytes); the order of
    ``symbols`` is the canonical order used for word enumeration.
    """

    symbols: Tuple[int, ...]
    renderings: Tuple[str, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.symbols) <= MAX_ALPHABET:
            raise DomainError(f"alphabet size must be in [1, {MAX_ALPHABET}], got {len(self.symbols)}")
        if len(set(self.symbols)) != len(self.symbols):
            raise DomainError("alphabet symbols must be pairwise distinct")
        if len(self.renderings) != len(self.symbols):
            raise DomainError("every symbol needs exactly one rendering")
        if len(set(self.renderings)) != len(self.renderings):
            raise DomainError("symbol renderings must be pairwise distinct")
        for symbol in self.symbols:
            if not 0 <= symbol <= 255:
                raise DomainError(f"symbol identifier {symbol} does not fit in a byte")
        for token in self.renderings:
            if not token or any(ch.isspace() for ch in token) or token.startswith("#"):
                raise DomainError(f"invalid symbol rendering {token!r}")

    @classmethod
    def from_renderings(cls, tokens: Iterable[str]) -> "Alphabet":
        """Alphabet whose symbols are 0..k-1, rendered by ``tokens``."""
        renderings = tuple(tokens)
        return cls(tuple(range(len(renderings))), renderings)

    @classmethod
    def integers(cls, lo: int, hi: int) -> "Alphabet":
        """Alphabet {lo..hi} rendered by the decimal digits of each symbol."""
        symbols = tuple(range(lo, hi + 1))
        return cls(symbols, tuple(str(s) for s in symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._positions

    @property
    def _positions(self) -> Dict[int, int]:
        # Cached on first use; the dataclass is frozen so bypass __setattr__.
        cache = self.__dict__.get("_position_cache")
        if cache is None:
            cache = {s: i for i, s in enumerate(self.symbols)}
            object.__setattr__(self, "_position_cache", cache)
        return cache

    @property
    def single_char(self) -> bool:
        return all(len(token) == 1 for token in self.renderings)

    @property
    def codes(self) -> np.ndarray:
        return np.array(self.symbols, dtype=np.uint8)

    def index(self, symbol: int) -> int:
        """Position of ``symbol`` in the canonical order."""
        try:
            return self._positions[symbol]
        except KeyError:
            raise DomainError(f"symbol {symbol} is not in the alphabet") from None

    def render(self, symbol: int) -> str:
        return self.renderings[self.index(symbol)]

    def parse(self, token: str) -> int:
        try:
            return self.symbols[self.renderings.index(token)]
        except ValueError:
            raise DomainError(f"token {token!r} is not in the alphabet") from None

    def render_word(self, word: Union["Word", bytes]) -> str:
        symbols = word.symbols if isinstance(word, Word) else word
        tokens = [self.render(s) for s in symbols]
        return "".join(tokens) if self.single_char else " ".join(tokens)

    def contains_all(self, data: Union[np.ndarray, bytes]) -> bool:
        arr = np.frombuffer(data, dtype=np.uint8) if isinstance(data, bytes) else data
        return bool(np.isin(arr, self.codes).all())

    def extended(self, renderings: Iterable[str]) -> Tuple["Alphabet", Tuple[int, ...]]:
        """
        Append fresh symbols to the alphabet.

        Args:
            renderings: printable tokens for the new symbols

        Returns:
            Tuple[Alphabet, Tuple[int, ...]]: the extended alphabet and the new symbol ids
        """
        tokens = tuple(renderings)
        fresh: List[int] = []
        candidate = 0
        used = set(self.symbols)
        while len(fresh) < len(tokens):
            if candidate > 255:
                raise DomainError("no free symbol identifiers left")
            if candidate not in used:
                fresh.append(candidate)
            candidate += 1
        return Alphabet(self.symbols + tuple(fresh), self.renderings + tokens), tuple(fresh)

    def union(self, other: "Alphabet") -> "Alphabet":
        if set(self.symbols) & set(other.symbols):
            raise DomainError("alphabets share symbol identifiers")
        return Alphabet(self.symbols + other.symbols, self.renderings + other.renderings)

    def free_token(self, preferred: Iterable[str]) -> str:
        """First token from ``preferred`` that is not already a rendering."""
        for token in preferred:
            if token not in self.renderings:
                return token
        raise DomainError("no free rendering among the preferred tokens")


@dataclass(frozen=True)
class Word:
    """A finite word; symbols are stored as bytes so words hash and slice cheaply."""

    symbols: bytes = b""

    def __post_init__(self) -> None:
        if not isinstance(self.symbols, bytes):
            object.__setattr__(self, "symbols", bytes(self.symbols))

    @classmethod
    def of(cls, *symbols: int) -> "Word":
        return cls(bytes(symbols))

    @classmethod
    def over(cls, alphabet: Alphabet, symbols: Iterable[int]) -> "Word":
        """Build a word and check every symbol against ``alphabet``."""
        data = bytes(symbols)
        for s in data:
            if s not in alphabet:
                raise DomainError(f"symbol {s} is not in the alphabet")
        return cls(data)

    @classmethod
    def parse(cls, alphabet: Alphabet, text: str) -> "Word":
        tokens = list(text) if alphabet.single_char else text.split()
        return cls(bytes(alphabet.parse(t) for t in tokens))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, item: Union[int, slice]) -> Union[int, "Word"]:
        if isinstance(item, slice):
            return Word(self.symbols[item])
        return self.symbols[item]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.symbols + other.symbols)

    @property
    def length(self) -> int:
        return len(self.symbols)

    def sort_key(self) -> Tuple[int, bytes]:
        return len(self.symbols), self.symbols

    def is_constant(self) -> bool:
        return len(set(self.symbols)) <= 1

    def render(self, alphabet: Alphabet) -> str:
        return alphabet.render_word(self)


class SequenceKind(Enum):
    BI_INFINITE = "bi-infinite"
    RIGHT_INFINITE = "right-infinite"


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


@dataclass(frozen=True)
class Provenance:
    """Which family produced a sequence, with which parameters."""

    family: str
    params: Tuple[Tuple[str, Any], ...] = ()
    minimal_sets: Tuple[str, ...] = ()
    generated: bool = True

    @classmethod
    def build(
        cls,
        family: str,
        params: Optional[Dict[str, Any]] = None,
        minimal_sets: Iterable[str] = (),
        generated: bool = True,
    ) -> "Provenance":
        items = tuple(sorted((k, _jsonable(v)) for k, v in (params or {}).items()))
        frozen = tuple((k, tuple(v) if isinstance(v, list) else v) for k, v in items)
        return cls(family, frozen, tuple(minimal_sets), generated)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family,
            "params": {k: _jsonable(v) for k, v in self.params},
            "minimal_sets": list(self.minimal_sets),
            "generated": self.generated,
        }

    def param(self, name: str, default: Any = None) -> Any:
        return dict(self.params).get(name, default)


def index_array(lo: int, hi: int) -> np.ndarray:
    if abs(lo) >= MAX_INDEX or abs(hi) >= MAX_INDEX:
        raise DomainError(f"index range [{lo}, {hi}] is too large to materialise")
    return np.arange(lo, hi + 1, dtype=np.int64)


class SymbolicSequence(ABC):
    """
    A lazily evaluated bi-infinite or right-infinite symbol stream.

    Subclasses implement ``_fill(lo, hi)``. ``symbol_at`` and ``window`` are
    derived from ``block`` so every access path goes through the same range
    checks.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        kind: SequenceKind,
        provenance: Provenance,
        horizon_hint: Optional[HorizonHint] = None,
    ) -> None:
        self.alphabet = alphabet
        self.kind = kind
        self.provenance = provenance
        self._horizon_hint = horizon_hint

    @property
    def first_index(self) -> Optional[int]:
        """Smallest valid index, or None when unbounded to the left."""
        return 0 if self.kind is SequenceKind.RIGHT_INFINITE else None

    @property
    def last_index(self) -> Optional[int]:
        """Largest valid index, or None when unbounded to the right."""
        return None

    @property
    def is_bounded(self) -> bool:
        return self.last_index is not None

    def _check_range(self, lo: int, hi: int) -> None:
        if lo > hi:
            raise DomainError(f"invalid index range [{lo}, {hi}]")
        first, last = self.first_index, self.last_index
        if first is not None and lo < first:
            raise DomainError(f"index {lo} precedes the first index {first}")
        if last is not None and hi > last:
            raise DomainError(f"index {hi} exceeds the last available index {last}")

    @abstractmethod
    def _fill(self, lo: int, hi: int) -> np.ndarray:
        """Return the symbols at [lo, hi] (already range checked)."""

    def block(self, lo: int, hi: int) -> np.ndarray:
        self._check_range(lo, hi)
        return self._fill(lo, hi)

    def symbol_at(self, i: int) -> int:
        return int(self.block(i, i)[0])

    def window(self, lo: int, hi: int) -> Word:
        return Word(self.block(lo, hi).tobytes())

    def shift(self, k: int) -> "SymbolicSequence":
        return shift(self, k)

    def language_view(self, limit: int) -> "SymbolicSequence":
        """A sequence with the same words of length <= ``limit``; the sequence itself by default."""
        return self

    def language_horizon(self, limit: int) -> Optional[Tuple[int, int]]:
        """A window known to contain every word of length <= ``limit``, when the family knows one."""
        if self._horizon_hint is None:
            return None
        return self._horizon_hint(limit)

    def minimal_languages(self, r: int) -> Optional[List[FrozenSet[bytes]]]:
        """Analytic r-languages of the minimal subsystems, for generated families."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.provenance.family}, {self.kind.value})"


class PeriodicSequence(SymbolicSequence):
    """u^∞ (right-infinite) or the bi-infinite orbit with u at [0, |u|-1]."""

    def __init__(
        self,
        word: bytes,
        alphabet: Alphabet,
        kind: SequenceKind = SequenceKind.BI_INFINITE,
        provenance: Optional[Provenance] = None,
    ) -> None:
        if not word:
            raise DomainError("periodic word must be nonempty")
        if not alphabet.contains_all(word):
            raise DomainError("periodic word uses symbols outside the alphabet")
        super().__init__(
            alphabet,
            kind,
            provenance or Provenance.build("periodic", {"word": alphabet.render_word(word)}),
            horizon_hint=lambda limit: (-(limit + len(word)), limit + 2 * len(word)),
        )
        self.word = word
        self._data = np.frombuffer(word, dtype=np.uint8)

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        p = len(self.word)
        offsets = (np.arange(hi - lo + 1, dtype=np.int64) + (lo % p)) % p
        return self._data[offsets]


class EventuallyPeriodicSequence(SymbolicSequence):
    """Right-infinite ``prefix`` followed by ``period`` repeated forever."""

    def __init__(
        self,
        prefix: bytes,
        period: bytes,
        alphabet: Alphabet,
        provenance: Optional[Provenance] = None,
    ) -> None:
        if not period:
            raise DomainError("period must be nonempty")
        super().__init__(
            alphabet,
            SequenceKind.RIGHT_INFINITE,
            provenance or Provenance.build("eventually-periodic"),
        )
        self.prefix = prefix
        self.period = period
        self._prefix = np.frombuffer(prefix, dtype=np.uint8)
        self._period = np.frombuffer(period, dtype=np.uint8)

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        idx = index_array(lo, hi)
        out = np.empty(idx.size, dtype=np.uint8)
        head = idx < len(self.prefix)
        out[head] = self._prefix[idx[head]]
        tail = ~head
        out[tail] = self._period[(idx[tail] - len(self.prefix)) % len(self.period)]
        return out


class TwoSidedSequence(SymbolicSequence):
    """
    Bi-infinite sequence glued from two right-infinite halves.

    Index i >= 0 reads ``right`` at i; index -t (t >= 1) reads ``left`` at t-1,
    so ``left`` is the left half read from the origin outwards.
    """

    def __init__(
        self,
        left: SymbolicSequence,
        right: SymbolicSequence,
        alphabet: Alphabet,
        provenance: Provenance,
        horizon_hint: Optional[HorizonHint] = None,
    ) -> None:
        for half in (left, right):
            if half.kind is not SequenceKind.RIGHT_INFINITE:
                raise DomainError("both halves must be right-infinite")
        super().__init__(alphabet, SequenceKind.BI_INFINITE, provenance, horizon_hint)
        self.left = left
        self.right = right

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        parts = []
        if lo < 0:
            top = min(hi, -1)
            parts.append(self.left.block(-top - 1, -lo - 1)[::-1])
        if hi >= 0:
            parts.append(self.right.block(max(lo, 0), hi))
        return parts[0] if len(parts) == 1 else np.concatenate(parts)


class ShiftedSequence(SymbolicSequence):
    """``base`` read from offset ``k``: symbol i is base[i + k]."""

    def __init__(self, base: SymbolicSequence, k: int, kind: Optional[SequenceKind] = None) -> None:
        super().__init__(
            base.alphabet,
            kind or base.kind,
            base.provenance,
        )
        self.base = base
        self.k = k

    @property
    def first_index(self) -> Optional[int]:
        if self.kind is SequenceKind.RIGHT_INFINITE:
            return 0
        base_first = self.base.first_index
        return None if base_first is None else base_first - self.k

    @property
    def last_index(self) -> Optional[int]:
        last = self.base.last_index
        return None if last is None else last - self.k

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        return self.base.block(lo + self.k, hi + self.k)

    def language_view(self, limit: int) -> SymbolicSequence:
        # A shifted bi-infinite point has the same orbit, hence the same language.
        if self.kind is SequenceKind.BI_INFINITE and self.base.kind is SequenceKind.BI_INFINITE:
            return self.base.language_view(limit)
        return self


class ReversedSequence(SymbolicSequence):
    """Right-infinite reading of ``base`` backwards from ``pivot``: symbol k is base[pivot - k]."""

    def __init__(self, base: SymbolicSequence, pivot: int) -> None:
        if base.first_index is not None:
            raise DomainError("reading backwards needs a sequence unbounded to the left")
        super().__init__(base.alphabet, SequenceKind.RIGHT_INFINITE, base.provenance)
        self.base = base
        self.pivot = pivot

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        return self.base.block(self.pivot - hi, self.pivot - lo)[::-1]


class ArraySequence(SymbolicSequence):
    """
    Finite external data. ``origin`` is the position of index 0 inside ``data``,
    so the available index range is [-origin, len(data) - origin - 1].
    """

    def __init__(
        self,
        data: np.ndarray,
        alphabet: Alphabet,
        origin: int = 0,
        kind: SequenceKind = SequenceKind.RIGHT_INFINITE,
        provenance: Optional[Provenance] = None,
    ) -> None:
        data = np.ascontiguousarray(data, dtype=np.uint8)
        if data.size == 0:
            raise DomainError("sequence data is empty")
        if not alphabet.contains_all(data):
            raise DomainError("sequence data uses symbols outside the declared alphabet")
        if kind is SequenceKind.RIGHT_INFINITE and origin != 0:
            raise DomainError("a right-infinite sequence starts at index 0")
        if not 0 <= origin < data.size:
            raise DomainError(f"origin {origin} lies outside the data")
        super().__init__(
            alphabet,
            kind,
            provenance or Provenance.build("external", generated=False),
        )
        self.data = data
        self.origin = origin

    @property
    def first_index(self) -> Optional[int]:
        return -self.origin

    @property
    def last_index(self) -> Optional[int]:
        return int(self.data.size) - self.origin - 1

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        return self.data[lo + self.origin: hi + self.origin + 1].copy()


class RuleSequence(SymbolicSequence):
    """Sequence given by a total rule ``index -> symbol`` (evaluated symbol by symbol)."""

    def __init__(
        self,
        rule: Callable[[int], int],
        alphabet: Alphabet,
        kind: SequenceKind,
        provenance: Optional[Provenance] = None,
    ) -> None:
        super().__init__(alphabet, kind, provenance or Provenance.build("rule", generated=False))
        self.rule = rule

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        out = np.fromiter((self.rule(i) for i in range(lo, hi + 1)), dtype=np.int64, count=hi - lo + 1)
        if not np.isin(out, self.alphabet.codes).all():
            raise DomainError("rule emitted a symbol outside the alphabet")
        return out.astype(np.uint8)


@dataclass(frozen=True)
class Segment:
    """
    A stretch of a segmented sequence: ``length`` copies of ``symbol``, or the
    first ``length`` symbols of ``source``.
    """

    length: int
    symbol: Optional[int] = None
    source: Optional[SymbolicSequence] = None

    def fill(self, lo: int, hi: int) -> np.ndarray:
        """Symbols at offsets [lo, hi] inside the segment."""
        if self.source is not None:
            return self.source.block(lo, hi)
        return np.full(hi - lo + 1, self.symbol, dtype=np.uint8)


class SegmentedSequence(SymbolicSequence):
    """
    Right-infinite concatenation of segments produced lazily by a generator.

    Segment lengths may be arbitrarily large Python integers; only segments up
    to the highest queried index are ever requested from the generator.
    """

    def __init__(
        self,
        segments: Callable[[], Iterator[Segment]],
        alphabet: Alphabet,
        provenance: Provenance,
    ) -> None:
        super().__init__(alphabet, SequenceKind.RIGHT_INFINITE, provenance)
        self._factory = segments
        self._iterator: Optional[Iterator[Segment]] = None
        self._segments: List[Segment] = []
        self._starts: List[int] = []
        self._end = 0
        self._lock = threading.Lock()

    def _extend_to(self, hi: int) -> None:
        with self._lock:
            if self._iterator is None:
                self._iterator = self._factory()
            while self._end <= hi:
                try:
                    segment = next(self._iterator)
                except StopIteration:
                    raise DomainError(f"segmented sequence ends before index {hi}") from None
                if segment.length <= 0:
                    continue
                self._segments.append(segment)
                self._starts.append(self._end)
                self._end += segment.length

    def segment_at(self, i: int) -> Tuple[int, Segment]:
        """Start index and segment containing index i."""
        self._extend_to(i)
        pos = bisect.bisect_right(self._starts, i) - 1
        return self._starts[pos], self._segments[pos]

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        self._extend_to(hi)
        pos = bisect.bisect_right(self._starts, lo) - 1
        parts = []
        cursor = lo
        while cursor <= hi:
            start, segment = self._starts[pos], self._segments[pos]
            stop = min(hi, start + segment.length - 1)
            parts.append(segment.fill(cursor - start, stop - start))
            cursor = stop + 1
            pos += 1
        return parts[0] if len(parts) == 1 else np.concatenate(parts)


def shift(seq: SymbolicSequence, k: int) -> SymbolicSequence:
    """
    Shift a sequence by k: result.symbol_at(i) == seq.symbol_at(i + k).

    Args:
        seq: the sequence to shift
        k: shift amount (must be >= 0 for right-infinite sequences)

    Returns:
        SymbolicSequence: the shifted sequence
    """
    if seq.kind is SequenceKind.RIGHT_INFINITE and k < 0:
        raise DomainError("a right-infinite sequence cannot be shifted by a negative amount")
    if k == 0:
        return seq
    if isinstance(seq, ShiftedSequence) and seq.kind is seq.base.kind:
        return shift(seq.base, seq.k + k)
    return ShiftedSequence(seq, k)


def restrict_right(seq: SymbolicSequence, start: int) -> SymbolicSequence:
    """Right-infinite sequence seq[start], seq[start+1], ..."""
    return ShiftedSequence(seq, start, kind=SequenceKind.RIGHT_INFINITE)


def window(seq: SymbolicSequence, lo: int, hi: int) -> Word:
    """The word seq[lo..hi] (inclusive)."""
    return seq.window(lo, hi)
