"""
Sliding block codes and the factor maps used to separate minimal subsystems.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from string import ascii_uppercase
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .language import LanguageTable
from .words import (
    Alphabet,
    DomainError,
    Provenance,
    SequenceKind,
    SymbolicSequence,
    Word,
)

logger = logging.getLogger(__name__)

MARKER_TOKENS = ("b", "B", "m", "M", "*", "|", "+")


@dataclass(frozen=True)
class BlockMap:
    """
    f(x)_i = rule(x_{i-m} ... x_{i+a}).

    ``rule`` receives the window as bytes and returns a target symbol; the
    result is checked against the target alphabet on every new window.
    """

    memory: int
    anticipation: int
    source: Alphabet
    target: Alphabet
    rule: Callable[[bytes], int] = field(compare=False)
    name: str = "block-map"

    def __post_init__(self) -> None:
        if self.memory < 0 or self.anticipation < 0:
            raise DomainError("memory and anticipation must be nonnegative")

    @property
    def width(self) -> int:
        return self.memory + self.anticipation + 1

    def image(self, window: bytes) -> int:
        if len(window) != self.width:
            raise DomainError(f"{self.name} reads windows of length {self.width}, got {len(window)}")
        symbol = int(self.rule(window))
        if symbol not in self.target:
            raise DomainError(f"{self.name} emitted symbol {symbol} outside its target alphabet")
        return symbol

    def apply_array(self, data: np.ndarray) -> np.ndarray:
        """Images of every width-window of ``data``; the result has len(data) - width + 1 symbols."""
        if data.size < self.width:
            raise DomainError(f"need at least {self.width} symbols, got {data.size}")
        if self.width == 1:
            uniq, inverse = np.unique(data, return_inverse=True)
            images = np.array([self.image(bytes([int(s)])) for s in uniq.tolist()], dtype=np.uint8)
            return images[inverse.reshape(-1)]
        windows = sliding_window_view(np.ascontiguousarray(data, dtype=np.uint8), self.width)
        uniq, inverse = np.unique(windows, axis=0, return_inverse=True)
        images = np.array([self.image(row.tobytes()) for row in uniq], dtype=np.uint8)
        return images[inverse.reshape(-1)]

    def describe(self) -> Dict[str, object]:
        return {"map": self.name, "memory": self.memory, "anticipation": self.anticipation}


def identity(alphabet: Alphabet) -> BlockMap:
    return BlockMap(0, 0, alphabet, alphabet, lambda w: w[0], name="identity")


def table_map(
    table: Mapping[bytes, int],
    memory: int,
    source: Alphabet,
    target: Alphabet,
    name: str = "custom",
) -> BlockMap:
    """
    A block map given by an explicit window table. Windows missing from the
    table map to their own symbol at the memory position.
    """
    widths = {len(w) for w in table}
    if len(widths) > 1:
        raise DomainError("rule table windows must all have the same length")
    width = widths.pop() if widths else memory + 1
    if width < memory + 1:
        raise DomainError("rule windows are shorter than memory + 1")
    lookup = dict(table)
    return BlockMap(memory, width - memory - 1, source, target, lambda w: lookup.get(w, w[memory]), name=name)


def apply_to_word(f: BlockMap, w: Word) -> Word:
    """
    Slide ``f`` along a finite word.

    Args:
        f: the block map
        w: word of length at least f.width

    Returns:
        Word: the image, of length |w| - m - a
    """
    if len(w) < f.width:
        raise DomainError(f"word of length {len(w)} is shorter than the map width {f.width}")
    return Word(f.apply_array(np.frombuffer(w.symbols, dtype=np.uint8)).tobytes())


class MappedSequence(SymbolicSequence):
    """The image f(x) of a sequence, evaluated window by window on demand."""

    def __init__(self, f: BlockMap, base: SymbolicSequence) -> None:
        params = dict(f.describe(), source=base.provenance.as_dict())
        super().__init__(f.target, base.kind, Provenance.build(f"{f.name}({base.provenance.family})", params))
        self.f = f
        self.base = base

    @property
    def first_index(self) -> Optional[int]:
        first = self.base.first_index
        if self.kind is SequenceKind.RIGHT_INFINITE:
            return 0
        return None if first is None else first + self.f.memory

    @property
    def last_index(self) -> Optional[int]:
        last = self.base.last_index
        return None if last is None else last - self.f.anticipation

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        return self.f.apply_array(self.base.block(lo - self.f.memory, hi + self.f.anticipation))

    def language_view(self, limit: int) -> SymbolicSequence:
        view = self.base.language_view(limit + self.f.width - 1)
        return self if view is self.base else MappedSequence(self.f, view)

    def language_horizon(self, limit: int) -> Optional[Tuple[int, int]]:
        hint = self.base.language_horizon(limit + self.f.width - 1)
        if hint is None:
            return None
        return hint[0] + self.f.memory, hint[1] - self.f.anticipation

    def minimal_languages(self, r: int) -> Optional[List[FrozenSet[bytes]]]:
        languages = self.base.minimal_languages(r + self.f.width - 1)
        if languages is None:
            return None
        out = []
        for words in languages:
            out.append(frozenset(apply_to_word(self.f, Word(w)).symbols for w in words))
        return out


def apply_to_sequence(f: BlockMap, seq: SymbolicSequence) -> MappedSequence:
    """
    The sequence f(seq): symbol i is rule(seq[i-m .. i+a]).

    Right-infinite inputs need memory 0.
    """
    if seq.alphabet.symbols != f.source.symbols:
        if not set(seq.alphabet.symbols) <= set(f.source.symbols):
            raise DomainError(f"sequence alphabet does not match the source alphabet of {f.name}")
    if seq.kind is SequenceKind.RIGHT_INFINITE and f.memory > 0:
        raise DomainError("a map with memory cannot act on a right-infinite sequence")
    return MappedSequence(f, seq)


def compose(g: BlockMap, f: BlockMap) -> BlockMap:
    """g ∘ f: memory and anticipation add; the rule applies g to the f-image of the window."""
    if set(f.target.symbols) - set(g.source.symbols):
        raise DomainError(f"target alphabet of {f.name} is not the source alphabet of {g.name}")

    def rule(window: bytes) -> int:
        inner = f.apply_array(np.frombuffer(window, dtype=np.uint8))
        return g.image(inner.tobytes())

    return BlockMap(
        f.memory + g.memory,
        f.anticipation + g.anticipation,
        f.source,
        g.target,
        rule,
        name=f"{g.name}.{f.name}",
    )


def smallest_disjoint_r(seq: SymbolicSequence, max_r: int = 1024) -> int:
    """Least r at which the minimal subsystems of ``seq`` have pairwise disjoint r-languages."""
    for r in range(1, max_r + 1):
        languages = seq.minimal_languages(r)
        if languages is None:
            raise DomainError("the minimal subsystems of this sequence are not known")
        if _pairwise_disjoint(languages):
            return r
    raise DomainError(f"minimal languages still overlap at r = {max_r}")


def _pairwise_disjoint(languages: Sequence[FrozenSet[bytes]]) -> bool:
    seen: set = set()
    for words in languages:
        if seen & words:
            return False
        seen |= words
    return True


def build_pi_factors(
    minimal_languages: Sequence[FrozenSet[bytes]],
    r: int,
    source: Alphabet,
) -> Tuple[BlockMap, BlockMap]:
    """
    The two factors φ and ψ of π for the minimal subsystems M_1..M_j.

    φ (memory 0, anticipation r-1) writes a_p where the r-window is in L_r(M_p)
    and keeps the window's first symbol otherwise. ψ (memory 0, anticipation 1)
    writes the marker b on every 2-window a_p s or s a_p with s != a_p and keeps
    the first symbol otherwise.

    Args:
        minimal_languages: L_r(M_p) for p = 1..j, pairwise disjoint
        r: the common word length
        source: alphabet of the sequence being mapped

    Returns:
        Tuple[BlockMap, BlockMap]: (φ, ψ), both into source + {a_1..a_j, b}
    """
    if r < 1:
        raise DomainError("r must be positive")
    for words in minimal_languages:
        if any(len(w) != r for w in words):
            raise DomainError(f"minimal languages must consist of {r}-words")
    if not _pairwise_disjoint(minimal_languages):
        raise DomainError(f"minimal languages are not pairwise disjoint at r = {r}")
    j = len(minimal_languages)
    tokens = []
    scratch = source
    for _ in range(j):
        token = scratch.free_token(ascii_uppercase)
        tokens.append(token)
        scratch, _ = scratch.extended([token])
    marker_token = scratch.free_token(MARKER_TOKENS)
    target, fresh = source.extended(tokens + [marker_token])
    collapsed, marker = fresh[:j], fresh[j]
    owner: Dict[bytes, int] = {}
    for symbol, words in zip(collapsed, minimal_languages):
        for w in words:
            owner[w] = symbol
    marks = set(collapsed)

    phi = BlockMap(0, r - 1, source, target, lambda w: owner.get(w, w[0]), name="phi")

    def psi_rule(w: bytes) -> int:
        first, second = w[0], w[1]
        if first != second and (first in marks or second in marks):
            return marker
        return first

    psi = BlockMap(0, 1, target, target, psi_rule, name="psi")
    logger.debug("pi: r = %d, collapsed symbols %s, marker %s", r, tokens, marker_token)
    return phi, psi


def build_pi(
    minimal_languages: Sequence[FrozenSet[bytes]],
    r: int,
    source: Alphabet,
) -> BlockMap:
    """π = ψ ∘ φ, of width r + 1; see ``build_pi_factors``."""
    phi, psi = build_pi_factors(minimal_languages, r, source)
    pi = compose(psi, phi)
    return BlockMap(pi.memory, pi.anticipation, phi.source, psi.target, pi.rule, name="pi")


def collapsed_symbols(pi: BlockMap, count: int) -> Tuple[int, ...]:
    """The symbols a_1..a_count introduced by ``build_pi`` (the marker follows them)."""
    fresh = pi.target.symbols[len(pi.source):]
    return tuple(fresh[:count])


def build_collapse(
    minimal_language: FrozenSet[bytes],
    r: int,
    source: Alphabet,
    source_words: Optional[FrozenSet[bytes]] = None,
) -> BlockMap:
    """
    r-block map writing 0 where the window lies in L_r(M) and 1 elsewhere.

    ``source_words`` (the r-words of the sequence being mapped) sharpens the
    properness check; without it the comparison is against all r-words of the
    alphabet.
    """
    if not minimal_language:
        raise DomainError("the minimal language must be nonempty")
    if any(len(w) != r for w in minimal_language):
        raise DomainError(f"minimal language must consist of {r}-words")
    if source_words is not None:
        proper = not source_words <= minimal_language
    else:
        proper = len(minimal_language) < len(source) ** r
    if not proper:
        raise DomainError("the minimal language covers every source word; the image would be a fixed point")
    target = Alphabet.integers(0, 1)
    words = frozenset(minimal_language)
    return BlockMap(0, r - 1, source, target, lambda w: 0 if w in words else 1, name="collapse")


def build_reduction(source: Alphabet, marker: int) -> BlockMap:
    """1-block map sending ``marker`` to 0 and every other symbol to 1."""
    if marker not in source:
        raise DomainError(f"symbol {marker} is not in the source alphabet")
    return BlockMap(0, 0, source, Alphabet.integers(0, 1), lambda w: 0 if w[0] == marker else 1, name="reduction")


def build_letter_collapse(source: Alphabet, target: Alphabet, mapping: Mapping[int, int]) -> BlockMap:
    """1-block map renaming symbols by ``mapping`` (identity where absent)."""
    table = dict(mapping)
    return BlockMap(0, 0, source, target, lambda w: table.get(w[0], w[0]), name="letter-collapse")


def preimage_census(f: BlockMap, table: LanguageTable, n: int) -> Dict[bytes, int]:
    """
    Number of n-words of ``table`` mapping onto each (n - width + 1)-word.

    Args:
        f: the block map
        table: language table of the source
        n: source word length (at most table.n_max + 1)

    Returns:
        Dict[bytes, int]: image word -> preimage count
    """
    if n < f.width:
        raise DomainError(f"n must be at least the map width {f.width}")
    counts: Dict[bytes, int] = {}
    for w in table.words[n]:
        image = apply_to_word(f, Word(w)).symbols
        counts[image] = counts.get(image, 0) + 1
    return counts
