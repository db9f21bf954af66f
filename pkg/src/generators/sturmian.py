"""
Sturmian codings of irrational rotations.

A point x0 is rotated by beta and coded 1 when it lands in [0, beta), else 0.
Orbit points are evaluated in 64-bit fixed point with numpy; any index whose
point comes within the accumulated rounding error of a cut point is redone in
exact integer arithmetic at the full precision. An index still within the
guard band is retried with the precision doubled and the guard band narrowed
to match; only one that stays ambiguous at ``MAX_PRECISION_BITS`` raises
``CodingAmbiguityError``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np

from ..components.language import window_counts
from ..components.words import (
    Alphabet,
    DomainError,
    Provenance,
    SequenceKind,
    SymbolicSequence,
    index_array,
)

logger = logging.getLogger(__name__)

DECIMAL_DIGITS = 200
DEFAULT_PRECISION_BITS = 256
DEFAULT_GUARD_BITS = 64
MAX_PRECISION_BITS = 4096
RATIONAL_DENOMINATOR_LIMIT = 1 << 20
SLOPE_DIGITS = 40


class CodingAmbiguityError(DomainError):
    """An orbit point lies within the guard band of a cut point even at the maximum precision."""


def golden_conjugate() -> Decimal:
    """(sqrt(5) - 1) / 2"""
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return (Decimal(5).sqrt() - 1) / 2


def silver_conjugate() -> Decimal:
    """sqrt(2) - 1"""
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return Decimal(2).sqrt() - 1


def band_slope(N: int, kind: str = "golden") -> Decimal:
    """
    A slope in (1/(N+1), 1/N): 1/(N + t) with t the golden or silver conjugate.

    Its continued fraction starts [0; N, ...], so the gaps between consecutive
    1s of the coding are N-1 or N.
    """
    if N < 1:
        raise DomainError("N must be positive")
    t = {"golden": golden_conjugate, "silver": silver_conjugate}.get(kind)
    if t is None:
        raise DomainError(f"unknown slope kind {kind!r}")
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return Decimal(1) / (Decimal(N) + t())


def parse_slope(text: str) -> Decimal:
    """
    Parse a slope name: ``golden``, ``silver``, ``band:N`` / ``band:N:silver``,
    or a decimal literal.
    """
    text = text.strip().lower()
    if text == "golden":
        return golden_conjugate()
    if text == "silver":
        return silver_conjugate()
    if text.startswith("band:"):
        parts = text.split(":")
        try:
            N = int(parts[1])
        except (IndexError, ValueError):
            raise DomainError(f"invalid band slope {text!r}") from None
        return band_slope(N, parts[2] if len(parts) > 2 else "golden")
    try:
        return Decimal(text)
    except Exception:
        raise DomainError(f"invalid slope {text!r}") from None


def _fixed(value: Decimal, bits: int) -> int:
    return int(Fraction(value) * (1 << bits))


@dataclass(frozen=True)
class SturmianParams:
    """Slope, starting point and optional relabeling of a Sturmian coding."""

    beta: Decimal
    x0: Optional[Decimal] = None
    relabeling: Optional[Tuple[int, int]] = None
    renderings: Optional[Tuple[str, str]] = None
    precision_bits: int = DEFAULT_PRECISION_BITS
    guard_bits: int = DEFAULT_GUARD_BITS

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", Decimal(self.beta))
        if not 0 < self.beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if self.x0 is not None:
            object.__setattr__(self, "x0", Decimal(self.x0))
            if not 0 < self.x0 < 1:
                raise DomainError(f"x0 must lie in (0, 1), got {self.x0}")
        if self.guard_bits < 8 or self.precision_bits - self.guard_bits < 64:
            raise DomainError("precision must exceed the guard band by at least 64 bits")
        exact = Fraction(self.beta)
        nearby = exact.limit_denominator(RATIONAL_DENOMINATOR_LIMIT)
        if abs(exact - nearby) < Fraction(1, 1 << self.guard_bits):
            raise DomainError(f"beta is rational within the working resolution ({nearby})")
        if self.relabeling is not None and self.relabeling[0] == self.relabeling[1]:
            raise DomainError("relabeling must use two distinct symbols")

    @property
    def start(self) -> Decimal:
        return self.x0 if self.x0 is not None else self.beta / 2

    @property
    def symbols(self) -> Tuple[int, int]:
        return self.relabeling if self.relabeling is not None else (0, 1)

    def alphabet(self) -> Alphabet:
        symbols = self.symbols
        renderings = self.renderings or (str(symbols[0]), str(symbols[1]))
        return Alphabet(symbols, renderings)

    def describe(self) -> Dict[str, object]:
        return {
            "beta": format(self.beta, f".{SLOPE_DIGITS}f"),
            "x0": format(self.start, f".{SLOPE_DIGITS}f"),
            "relabeling": list(self.symbols),
            "precision_bits": self.precision_bits,
        }


class SturmianSequence(SymbolicSequence):
    """
    s_n = 1 iff x0 + n*beta (mod 1) lies in [0, beta), relabeled per the params.

    ``start_units`` overrides x0 with an exact fixed-point value (units of
    2**-precision_bits); the characteristic word uses it.
    """

    def __init__(
        self,
        params: SturmianParams,
        kind: SequenceKind = SequenceKind.BI_INFINITE,
        start_units: Optional[int] = None,
        family: str = "sturmian",
    ) -> None:
        super().__init__(
            params.alphabet(),
            kind,
            Provenance.build(
                family,
                params.describe(),
                minimal_sets=(f"sturmian(beta={format(params.beta, '.12f')})",),
            ),
        )
        self.params = params
        bits = params.precision_bits
        self._modulus = 1 << bits
        self._beta_units = _fixed(params.beta, bits)
        self._start_fixed = start_units is not None
        self._start_units = start_units if start_units is not None else _fixed(params.start, bits)
        self._beta64 = np.uint64(self._beta_units >> (bits - 64))
        self._start64 = np.uint64(self._start_units >> (bits - 64))
        self._lookup = np.array(params.symbols, dtype=np.uint8)
        self._covering: Dict[int, int] = {}

    def _units(self, bits: int) -> Tuple[int, int]:
        """(beta, start) in units of 2**-bits."""
        base = self.params.precision_bits
        if bits == base:
            return self._beta_units, self._start_units
        if self._start_fixed:
            start = self._start_units << (bits - base)
        else:
            start = _fixed(self.params.start, bits)
        return _fixed(self.params.beta, bits), start

    def _exact_symbol(self, i: int) -> int:
        bits, guard = self.params.precision_bits, self.params.guard_bits
        while True:
            beta, start = self._units(bits)
            modulus = 1 << bits
            point = (start + i * beta) % modulus
            slack = abs(i) + 4 + (1 << (bits - guard))
            if all(min((point - cut) % modulus, (cut - point) % modulus) > slack for cut in (0, beta)):
                return 1 if point < beta else 0
            if bits >= MAX_PRECISION_BITS:
                raise CodingAmbiguityError(
                    f"orbit point at index {i} is within 2^-{guard} of a cut point at {bits} bits of precision"
                )
            logger.debug("index %d lies within 2^-%d of a cut; retrying at %d bits", i, guard, 2 * bits)
            bits, guard = 2 * bits, guard + bits

    def _fill(self, lo: int, hi: int) -> np.ndarray:
        idx = index_array(lo, hi)
        steps = idx.view(np.uint64)
        points = self._start64 + steps * self._beta64
        ones = points < self._beta64
        error = np.abs(idx).astype(np.uint64) + np.uint64(4)
        zero = np.uint64(0)
        near_zero = np.minimum(points, zero - points) <= error
        offset = points - self._beta64
        near_beta = np.minimum(offset, zero - offset) <= error
        for pos in np.flatnonzero(near_zero | near_beta).tolist():
            ones[pos] = self._exact_symbol(lo + pos) == 1
        return self._lookup[ones.astype(np.intp)]

    def covering_length(self, n: int, start: int = 0) -> int:
        """
        Length m of a stretch s[start..start+m-1] that contains all n+1 words of length n.
        """
        if start == 0 and n in self._covering:
            return self._covering[n]
        m = max(4 * n, 64)
        while True:
            counts = window_counts(self.block(start, start + m - 1), n)
            if counts[n - 1] >= n + 1:
                break
            m *= 2
        if start == 0:
            self._covering[n] = m
        return m

    def language_horizon(self, limit: int) -> Optional[Tuple[int, int]]:
        m = self.covering_length(limit)
        if self.kind is SequenceKind.RIGHT_INFINITE:
            return 0, m + limit
        return -limit, m + limit

    def minimal_languages(self, r: int) -> Optional[List[FrozenSet[bytes]]]:
        return [sturmian_language(self.params, r)]


def sturmian(params: SturmianParams) -> SturmianSequence:
    """The bi-infinite Sturmian coding described by ``params``."""
    return SturmianSequence(params)


def characteristic_word(params: SturmianParams) -> SturmianSequence:
    """
    Right-infinite characteristic word c(t) = floor((t+2)beta) - floor((t+1)beta), t >= 0.

    It is the coding of the orbit of 2*beta (mod 1); x0 of ``params`` is ignored.
    """
    bits = params.precision_bits
    start = (2 * _fixed(params.beta, bits)) % (1 << bits)
    return SturmianSequence(params, SequenceKind.RIGHT_INFINITE, start_units=start, family="characteristic")


@lru_cache(maxsize=256)
def sturmian_language(params: SturmianParams, r: int) -> FrozenSet[bytes]:
    """All r-words of the Sturmian subshift of slope params.beta (relabeled)."""
    word = characteristic_word(params)
    m = word.covering_length(r)
    raw = word.block(0, m - 1).tobytes()
    found = frozenset(raw[p: p + r] for p in range(len(raw) - r + 1))
    if len(found) != r + 1:
        raise DomainError(f"expected {r + 1} Sturmian words of length {r}, found {len(found)}")
    return found


STITCH_SYMBOL_BASE = 100


def stitch_slope(q: int) -> Decimal:
    """Slope of the q-th stitched letter (q >= 0): golden, silver, then band slopes."""
    if q == 0:
        return golden_conjugate()
    if q == 1:
        return silver_conjugate()
    return band_slope(q + 1, "silver")


def default_stitch_params(j: int, i: int) -> Tuple[SturmianParams, ...]:
    """
    Pairwise distinct Sturmians for the stitched letters j-i+1..j, each on two
    fresh symbols rendered 'a'/'b', 'c'/'d', ...
    """
    if i > 13:
        raise DomainError("at most 13 stitched letters have single-character renderings")
    params = []
    for q in range(i):
        symbols = (STITCH_SYMBOL_BASE + 2 * q, STITCH_SYMBOL_BASE + 2 * q + 1)
        renderings = (chr(ord("a") + 2 * q), chr(ord("a") + 2 * q + 1))
        params.append(SturmianParams(stitch_slope(q), relabeling=symbols, renderings=renderings))
    return tuple(params)


def continued_fraction(beta: Decimal, max_terms: int = 200) -> List[int]:
    """
    Partial quotients [a0; a1, a2, ...] of beta that are certain at the
    precision beta was given with.
    """
    exact = Fraction(beta)
    eps = Fraction(1, 10 ** (DECIMAL_DIGITS - 10))
    lo, hi = exact - eps, exact + eps
    terms: List[int] = []
    while len(terms) < max_terms:
        a, b = lo.numerator // lo.denominator, hi.numerator // hi.denominator
        if a != b:
            break
        terms.append(a)
        lo, hi = lo - a, hi - a
        if lo <= 0:
            break
        lo, hi = 1 / hi, 1 / lo
    return terms


def central_lengths(beta: Decimal) -> Iterator[int]:
    """
    Lengths (>= 1, increasing) of the palindromic prefixes of the characteristic
    word of slope beta.

    With beta = [0; 1 + d1, d2, d3, ...] and standard words |s_-1| = |s_0| = 1,
    |s_n| = d_n |s_{n-1}| + |s_{n-2}|, the palindromic prefixes have lengths
    k |s_{n-1}| + |s_{n-2}| - 2 for 1 <= k <= d_n. The iterator stops when the
    partial quotients are no longer certain.
    """
    terms = continued_fraction(beta)
    if len(terms) < 2 or terms[0] != 0:
        raise DomainError("slope must lie in (0, 1)")
    directive = [terms[1] - 1] + terms[2:]
    before, last = 1, 1
    for d in directive:
        for k in range(1, d + 1):
            length = k * last + before - 2
            if length >= 1:
                yield length
        before, last = last, d * last + before
