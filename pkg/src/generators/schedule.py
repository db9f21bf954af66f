"""
Growth functions, the ruler sequence and the exponent schedules that drive
the run-length families.

Schedules grow roughly like towers, so entries are exact Python integers
resolved lazily in their natural order (1,1), (1,2), ..., (1,j), (2,1), ...
and an entry too large to write down raises ``ScheduleSearchError`` only
when something actually asks for it.
"""
from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from ..components.words import DomainError
from .sturmian import SturmianParams, central_lengths, default_stitch_params

logger = logging.getLogger(__name__)

MAX_ENTRY_BITS = 1 << 16
SEARCH_DOUBLINGS = 4096


class ScheduleSearchError(DomainError):
    """No admissible entry within the search cap or the representable size."""


def _check_bits(value: int, what: str) -> int:
    if value.bit_length() > MAX_ENTRY_BITS:
        raise ScheduleSearchError(f"{what} needs more than {MAX_ENTRY_BITS} bits")
    return value


def _log2_ceil(n: int) -> int:
    return max(1, (n - 1).bit_length())


def _log2_inverse(target: int) -> int:
    if target <= 1:
        return 1
    if target - 1 > MAX_ENTRY_BITS:
        raise ScheduleSearchError(f"ceil(log2 n) >= {target} needs more than {MAX_ENTRY_BITS} bits")
    return (1 << (target - 1)) + 1


def _sqrt_ceil(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 1 else 1


def _sqrt_inverse(target: int) -> int:
    return 1 if target <= 1 else (target - 1) ** 2 + 1


@dataclass(frozen=True)
class GrowthFunction:
    """
    Nondecreasing unbounded g on the positive integers.

    ``inverse`` (optional) returns the least n >= 1 with g(n) >= target; without
    it the least such n is found by doubling and bisection.
    """

    rule: Callable[[int], int]
    tag: str
    inverse: Optional[Callable[[int], int]] = None

    def __call__(self, n: int) -> int:
        return self.rule(n)

    @classmethod
    def log2(cls) -> "GrowthFunction":
        """ceil(log2 n), taken as 1 at n = 1 so values stay positive."""
        return cls(_log2_ceil, "log2", _log2_inverse)

    @classmethod
    def sqrt(cls) -> "GrowthFunction":
        return cls(_sqrt_ceil, "sqrt", _sqrt_inverse)

    @classmethod
    def linear(cls) -> "GrowthFunction":
        return cls(lambda n: n, "linear", lambda t: max(1, t))

    @classmethod
    def zero(cls) -> "GrowthFunction":
        """The zero function; only meaningful as a bound offset, never as a schedule driver."""
        return cls(lambda n: 0, "zero")

    @classmethod
    def from_tag(cls, tag: str) -> "GrowthFunction":
        builders = {"log2": cls.log2, "sqrt": cls.sqrt, "linear": cls.linear, "zero": cls.zero, "0": cls.zero}
        try:
            return builders[tag.strip().lower()]()
        except KeyError:
            raise DomainError(f"unknown growth function {tag!r} (use log2, sqrt or linear)") from None

    def least_at_least(self, target: int) -> int:
        if self.inverse is not None:
            return _check_bits(self.inverse(target), f"g(n) >= {target}")
        if self(1) >= target:
            return 1
        hi = 2
        for _ in range(SEARCH_DOUBLINGS):
            if self(hi) >= target:
                break
            hi *= 2
        else:
            raise ScheduleSearchError(
                f"growth function {self.tag} stays below {target} up to 2^{SEARCH_DOUBLINGS}; is it unbounded?"
            )
        lo = hi // 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self(mid) >= target:
                hi = mid
            else:
                lo = mid
        return hi

    def check(self, horizon: int) -> None:
        """Raise unless g is nondecreasing on 1..horizon and grows across it."""
        previous = self(1)
        for n in range(2, horizon + 1):
            value = self(n)
            if value < previous:
                raise DomainError(f"growth function {self.tag} decreases at n = {n}")
            previous = value
        if horizon > 1 and self(horizon) <= self(1):
            raise DomainError(f"growth function {self.tag} does not grow on 1..{horizon}")


def ruler(i: int) -> int:
    """
    The ruler sequence 1213121412131215...: one plus the 2-adic valuation of i.

    The value m first appears at i = 2**(m-1).
    """
    if i < 1:
        raise DomainError("ruler index must be positive")
    return (i & -i).bit_length()


class ChainLengths:
    """Admissible lengths of a stitched letter: palindromic-prefix lengths of its characteristic word."""

    def __init__(self, params: SturmianParams) -> None:
        self.params = params
        self._source: Iterator[int] = central_lengths(params.beta)
        self._known: List[int] = []

    def least_at_least(self, target: int) -> int:
        while not self._known or self._known[-1] < target:
            try:
                self._known.append(next(self._source))
            except StopIteration:
                raise ScheduleSearchError(
                    f"no nested Sturmian block of length >= {target} at the slope's precision"
                ) from None
        for length in self._known:
            if length >= target:
                return length
        raise AssertionError("unreachable")

    def __contains__(self, length: int) -> bool:
        self.least_at_least(length)
        return length in self._known


@dataclass(frozen=True)
class ConstraintRecord:
    """Why an entry has its value: each bound is (name, 'n' or 'g', rhs) meaning n >= rhs or g(n) >= rhs."""

    k: int
    p: int
    value: int
    bounds: Tuple[Tuple[str, str, int], ...]


class _Entries:
    def __init__(self) -> None:
        self.values: List[int] = []
        self.records: List[ConstraintRecord] = []
        self.total = 0
        self.lock = threading.RLock()


class ExponentSchedule:
    """
    Entries n_k^p (k >= 1, 1 <= p <= j) chosen as the least integers that clear
    every constraint by ``margin``. Letters j-i+1..j are stitched: their entries
    are further raised to the next nested-chain length of their Sturmian.
    """

    def __init__(
        self,
        j: int,
        i: int,
        g: GrowthFunction,
        margin: int = 1,
        sturmians: Sequence[SturmianParams] = (),
    ) -> None:
        if j < 2:
            raise DomainError("j must be at least 2")
        if not 0 <= i <= j:
            raise DomainError("i must lie in [0, j]")
        if margin < 1:
            raise DomainError("margin must be positive")
        if len(sturmians) != i:
            raise DomainError(f"expected {i} Sturmian parameter sets, got {len(sturmians)}")
        self.j = j
        self.i = i
        self.g = g
        self.margin = margin
        self.sturmians: Tuple[SturmianParams, ...] = tuple(sturmians)
        self._chains: Dict[int, ChainLengths] = {
            p: ChainLengths(params) for p, params in zip(range(j - i + 1, j + 1), self.sturmians)
        }
        self._entries = _Entries()

    @property
    def stitched_letters(self) -> Tuple[int, ...]:
        return tuple(range(self.j - self.i + 1, self.j + 1))

    def constant_view(self) -> "ExponentSchedule":
        """The same entries, labelled as an unstitched (i = 0) schedule."""
        view = ExponentSchedule.__new__(ExponentSchedule)
        view.j, view.i, view.g, view.margin = self.j, 0, self.g, self.margin
        view.sturmians = ()
        view._chains = self._chains
        view._entries = self._entries
        return view

    def describe(self) -> Dict[str, object]:
        return {"j": self.j, "i": self.i, "g": self.g.tag, "margin": self.margin}

    def _resolve_next(self) -> None:
        state = self._entries
        f = len(state.values)
        k, p = f // self.j + 1, f % self.j + 1
        previous = state.values[-1] if state.values else 0
        bounds: List[Tuple[str, str, int]] = [("growth", "n", previous + self.margin)]
        if p >= 3:
            bounds.append(("disjoint", "n", state.values[f - 1] + state.values[f - 2] + self.margin))
        bounds.append(("sharpness", "g", state.total + self.margin))
        if p == 1 and k >= 2:
            reach = self.census_reach(k - 1)
            bounds.append(("separation", "n", reach + self.margin))
            bounds.append(("liminf", "g", (self.j + 2) * reach + self.margin))
        n_floor = max(rhs for _, kind, rhs in bounds if kind == "n")
        g_target = max(rhs for _, kind, rhs in bounds if kind == "g")
        value = _check_bits(max(n_floor, self.g.least_at_least(g_target)), f"entry ({k}, {p})")
        chain = self._chains.get(p)
        if chain is not None:
            bounds.append(("stitch", "n", value))
            value = _check_bits(chain.least_at_least(value), f"stitched entry ({k}, {p})")
        state.values.append(value)
        state.total += value
        state.records.append(ConstraintRecord(k, p, value, tuple(bounds)))
        logger.debug("schedule %s: n_%d^%d = %s", self.g.tag, k, p, value if value.bit_length() < 64 else f"~2^{value.bit_length()}")

    def entry(self, k: int, p: int) -> int:
        if k < 1 or not 1 <= p <= self.j:
            raise DomainError(f"no schedule entry ({k}, {p})")
        flat = (k - 1) * self.j + (p - 1)
        with self._entries.lock:
            while len(self._entries.values) <= flat:
                self._resolve_next()
            return self._entries.values[flat]

    def generation(self, k: int) -> Tuple[int, ...]:
        return tuple(self.entry(k, p) for p in range(1, self.j + 1))

    def block_length(self, k: int) -> int:
        """|B_k| = n_k^1 + ... + n_k^j."""
        return sum(self.generation(k))

    def prefix_length(self, k: int) -> int:
        """L(k): total length of the blocks B_{w_1} ... B_{w_{2^(k-1)-1}}."""
        return sum((1 << (k - 1 - m)) * self.block_length(m) for m in range(1, k))

    def census_reach(self, k: int) -> int:
        """n_k^j + n_k^1 + L(k): the end of generation k's special-word ranges."""
        if k < 1:
            return 0
        return self.entry(k, self.j) + self.entry(k, 1) + self.prefix_length(k)

    @property
    def records(self) -> List[ConstraintRecord]:
        with self._entries.lock:
            return list(self._entries.records)

    def resolved(self) -> List[int]:
        with self._entries.lock:
            return list(self._entries.values)

    def validate(self) -> List[str]:
        """
        Re-check every resolved entry against the stated inequalities, independently
        of how the entries were chosen. Returns human-readable violations.
        """
        values = self.resolved()
        problems: List[str] = []
        total = 0
        for f, value in enumerate(values):
            k, p = f // self.j + 1, f % self.j + 1
            if f and value <= values[f - 1]:
                problems.append(f"n_{k}^{p} = {value} does not exceed its predecessor")
            if p >= 3 and value <= values[f - 1] + values[f - 2]:
                problems.append(f"n_{k}^{p} violates window disjointness")
            if self.g(value) <= total:
                problems.append(f"g(n_{k}^{p}) does not exceed the sum of earlier entries")
            if p == 1 and k >= 2:
                reach = values[f - 1] + values[f - self.j] + sum(
                    (1 << (k - 2 - m)) * sum(values[(m - 1) * self.j: m * self.j]) for m in range(1, k - 1)
                )
                if self.g(value) <= (self.j + 2) * reach:
                    problems.append(f"g(n_{k}^1) violates the liminf inequality")
            total += value
        for record in self.records:
            for name, kind, rhs in record.bounds:
                lhs = record.value if kind == "n" else self.g(record.value)
                if lhs < rhs:
                    problems.append(f"n_{record.k}^{record.p}: logged {name} bound {rhs} not met")
        return problems


class RunLengthSchedule:
    """
    n_1 < n_2 < ... with g(n_k) > n_1 + ... + n_{k-1} and n_k > n_{k-1} + n_{k-2},
    each the least integer clearing its constraints by ``margin``.
    """

    def __init__(self, g: GrowthFunction, margin: int = 1) -> None:
        if margin < 1:
            raise DomainError("margin must be positive")
        self.g = g
        self.margin = margin
        self._values: List[int] = []
        self._total = 0
        self._lock = threading.Lock()

    def entry(self, k: int) -> int:
        if k < 1:
            raise DomainError("run index must be positive")
        with self._lock:
            while len(self._values) < k:
                v = self._values
                floor = (v[-1] if v else 0) + self.margin
                if len(v) >= 2:
                    floor = max(floor, v[-1] + v[-2] + self.margin)
                value = max(floor, self.g.least_at_least(self._total + self.margin))
                _check_bits(value, f"run length {len(v) + 1}")
                v.append(value)
                self._total += value
            return self._values[k - 1]

    def describe(self) -> Dict[str, object]:
        return {"g": self.g.tag, "margin": self.margin}

    def validate(self, upto: int) -> List[str]:
        values = [self.entry(k) for k in range(1, upto + 1)]
        problems = []
        for k, value in enumerate(values, start=1):
            earlier = values[: k - 1]
            if earlier and value <= earlier[-1]:
                problems.append(f"n_{k} does not exceed n_{k - 1}")
            if len(earlier) >= 2 and value <= earlier[-1] + earlier[-2]:
                problems.append(f"n_{k} violates interval disjointness")
            if self.g(value) <= sum(earlier):
                problems.append(f"g(n_{k}) does not exceed the sum of earlier runs")
        return problems


def make_schedule(
    j: int,
    i: int,
    g: GrowthFunction,
    margin: int = 1,
    sturmians: Optional[Sequence[SturmianParams]] = None,
) -> ExponentSchedule:
    """
    The canonical least-admissible-plus-margin schedule.

    Args:
        j: number of run letters (>= 2)
        i: number of stitched letters (0..j)
        g: growth function
        margin: slack added to every constraint
        sturmians: slopes of the stitched letters; defaults are used when omitted

    Returns:
        ExponentSchedule: lazily resolved schedule
    """
    if sturmians is None:
        sturmians = default_stitch_params(j, i)
    return ExponentSchedule(j, i, g, margin, sturmians)
