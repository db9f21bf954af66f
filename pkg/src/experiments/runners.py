"""
Experiment runners.

Each runner takes its parameters and the loaded settings, builds the points it
needs, and records checks, traces and sources on a ``Findings``. Runners never
write files; the harness does.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..calculations.complexity import (
    BoundMode,
    BoundReport,
    ComplexityProfile,
    PeriodicityStatus,
    SpecialWordReport,
    Verdict,
    bound_report,
    census_bound,
    check_counting,
    complexity_frame,
    factor_preimage_check,
    minimal_candidates,
    morse_hedlund_classify,
    profile,
    special_census,
)
from ..calculations.measures import (
    CoverReport,
    ExtractionReport,
    WeakMetricSpec,
    empirical,
    ergodicity_probe,
    extract_generic_candidates,
    generic_limit_probe,
    point_mass,
    rs_window_cover_check,
    shift_average_check,
    weak_distance,
)
from ..components.block_maps import (
    apply_to_sequence,
    build_collapse,
    build_letter_collapse,
    build_pi,
    collapsed_symbols,
    preimage_census,
    smallest_disjoint_r,
)
from ..components.language import LanguageTable, build_language, detect_eventual_periodicity
from ..components.words import Alphabet, DomainError, SymbolicSequence, Word
from ..generators.families import (
    FamilySequence,
    from_tails,
    nonrecurrent_example,
    periodic,
    recurrent_sharp_family,
    staircase,
    stitched_family,
    transitive_family,
)
from ..generators.schedule import ExponentSchedule, GrowthFunction, ScheduleSearchError, make_schedule
from ..generators.sturmian import SturmianParams, parse_slope, sturmian, sturmian_language
from ..integrations.config import Settings
from .report import Findings, verdict_for

logger = logging.getLogger(__name__)

Params = Dict[str, Any]


def _analyse(seq: SymbolicSequence, n_max: int, settings: Settings) -> Tuple[LanguageTable, ComplexityProfile]:
    table = build_language(seq, n_max, settings.policy())
    return table, profile(table)


def _schedule_starts(schedule: ExponentSchedule, n_max: int) -> List[int]:
    """The entries n_k^1 that do not exceed n_max."""
    points = []
    k = 1
    while True:
        try:
            value = schedule.entry(k, 1)
        except ScheduleSearchError:
            break
        if value > n_max:
            break
        points.append(value)
        k += 1
    return points


def _next_start(schedule: ExponentSchedule, starts: Sequence[int]) -> str:
    try:
        return str(schedule.entry(len(starts) + 1, 1))
    except ScheduleSearchError:
        return "beyond the representable range"


def _growth_check(
    findings: Findings,
    label: str,
    prof: ComplexityProfile,
    alpha: int,
    schedule: ExponentSchedule,
    n_max: int,
) -> Optional[BoundReport]:
    """
    c(n) - alpha n read at the generation starts n_k^1; needs two starts inside
    the horizon, otherwise a note records where the next one lies.
    """
    starts = _schedule_starts(schedule, n_max)
    if len(starts) < 2:
        findings.notes.append(
            f"{label}: growth of c(n) - {alpha}n not checked; only n_k^1 = {starts} lie within "
            f"n_max = {n_max} and the next starts at {_next_start(schedule, starts)}"
        )
        return None
    report = bound_report(prof, alpha, None, BoundMode.LIMINF, marks=starts)
    _bound_check(findings, f"{label}: c(n) - {alpha}n tends to infinity", report)
    return report


def _bound_check(findings: Findings, name: str, report: BoundReport) -> None:
    detail = f"{len(report.levels)} levels up to {report.horizon}"
    if report.checkpoints:
        detail += f", checkpoint margins {[str(v) for _, v in report.checkpoints]}"
    elif report.margins:
        detail += f", largest margin {max(report.margins)}"
    findings.check(name, report.verdict, detail)


def _exact_check(findings: Findings, name: str, prof: ComplexityProfile, expected: Dict[int, int]) -> None:
    wrong = [n for n in sorted(expected) if prof.c(n) != expected[n]]
    if wrong:
        detail = f"c({wrong[0]}) = {prof.c(wrong[0])}, expected {expected[wrong[0]]}"
    else:
        detail = f"{len(expected)} levels"
    findings.check(name, verdict_for(not wrong, len(expected)), detail)


def _counting_check(
    findings: Findings, name: str, prof: ComplexityProfile, census: SpecialWordReport, exact: bool = False
) -> None:
    results = check_counting(prof, census)
    bad = [r for r in results if not r.holds or (exact and not r.exact)]
    detail = bad[0].describe() if bad else f"{len(results)} level pairs"
    findings.check(name, verdict_for(not bad, len(results)), detail)


def recurrent_bounds(params: Params, settings: Settings, findings: Findings) -> None:
    """Ceilings and lower bounds for the recurrent family and its stitched variants."""
    n_max = int(params["n_max"])
    margin = int(params["margin"])
    for j in params["j"]:
        for tag in params["growth"]:
            g = GrowthFunction.from_tag(tag)
            schedule = make_schedule(int(j), 0, g, margin)
            x = recurrent_sharp_family(schedule)
            table, prof = _analyse(x, n_max, settings)
            label = f"recurrent-j{j}-{tag}"
            ceiling = bound_report(prof, j + 1, g, BoundMode.CEILING)
            _bound_check(findings, f"{label}: c(n) <= (j+1)n + g(n)", ceiling)
            starts = _schedule_starts(schedule, n_max)
            sub = bound_report(prof, j, g, BoundMode.CEILING, points=starts)
            _bound_check(findings, f"{label}: c(n) <= jn + g(n) at n = n_k^1", sub)
            if len(starts) < 3:
                findings.notes.append(
                    f"{label}: c(n) <= jn + g(n) checked at n_k^1 for k = 1..{len(starts)} only; "
                    f"n_{len(starts) + 1}^1 = {_next_start(schedule, starts)} lies beyond n_max = {n_max}"
                )
            _growth_check(findings, label, prof, int(j), schedule, n_max)
            census = special_census(table)
            _counting_check(findings, f"{label}: counting identity", prof, census, exact=True)
            findings.trace(label, complexity_frame(prof, census, ceiling))
            findings.source(x, entries=schedule.resolved())

    stitched_n_max = int(params["stitched_n_max"])
    g = GrowthFunction.from_tag(params["stitched_growth"])
    for j, i in params["stitched"]:
        schedule = make_schedule(int(j), int(i), g, margin)
        x = stitched_family(schedule)
        base = recurrent_sharp_family(schedule.constant_view())
        table, prof = _analyse(x, stitched_n_max, settings)
        _, base_prof = _analyse(base, stitched_n_max, settings)
        label = f"stitched-j{j}-i{i}"
        levels = [n for n in prof.saturated_levels() if base_prof.is_saturated(n)]
        wrong = [n for n in levels if prof.c(n) != base_prof.c(n) + i * n]
        findings.check(
            f"{label}: c(n) = c_unstitched(n) + in",
            verdict_for(not wrong, len(levels)),
            f"first mismatch at n = {wrong[0]}" if wrong else f"{len(levels)} levels",
        )
        floor = _growth_check(findings, label, prof, int(j) + int(i), schedule, stitched_n_max)
        ceiling = bound_report(prof, j + i + 1, g, BoundMode.CEILING)
        _bound_check(findings, f"{label}: c(n) <= (j+i+1)n + g(n)", ceiling)
        _preimage_check(findings, label, x, schedule, table, base.alphabet, prof)
        findings.trace(label, complexity_frame(prof, report=floor or ceiling))
        findings.source(x, entries=schedule.resolved())


def _preimage_check(
    findings: Findings,
    label: str,
    x: FamilySequence,
    schedule: ExponentSchedule,
    table: LanguageTable,
    target: Alphabet,
    prof: ComplexityProfile,
) -> None:
    """Under the letter collapse, a stitched constant word p^n has n + 1 preimages and every other word one."""
    mapping = {}
    for p, params in zip(schedule.stitched_letters, x.sturmians):
        for symbol in params.symbols:
            mapping[symbol] = p
    collapse = build_letter_collapse(x.alphabet, target, mapping)
    stitched = set(schedule.stitched_letters)
    problems = []
    levels = [n for n in prof.saturated_levels() if n <= 40]
    for n in levels:
        for image, count in preimage_census(collapse, table, n).items():
            expected = n + 1 if image[0] in stitched and Word(image).is_constant() else 1
            if count != expected:
                problems.append(f"n = {n}: {target.render_word(image)} has {count} preimages")
    findings.check(
        f"{label}: preimage counts under the letter collapse",
        verdict_for(not problems, len(levels)),
        problems[0] if problems else f"{len(levels)} levels",
    )


def transitive_bounds(params: Params, settings: Settings, findings: Findings) -> None:
    """The transitive family stays below jn + g(n) while c(n) - jn grows."""
    n_max = int(params["n_max"])
    for j in params["j"]:
        for tag in params["growth"]:
            g = GrowthFunction.from_tag(tag)
            x = transitive_family(int(j), g, int(params["margin"]))
            table, prof = _analyse(x, n_max, settings)
            label = f"transitive-j{j}-{tag}"
            floor = bound_report(prof, j, None, BoundMode.LIMINF)
            _bound_check(findings, f"{label}: c(n) - jn tends to infinity", floor)
            ceiling = bound_report(prof, j, g, BoundMode.CEILING)
            _bound_check(findings, f"{label}: c(n) <= jn + g(n)", ceiling)
            census = special_census(table)
            _counting_check(findings, f"{label}: counting identity", prof, census, exact=True)
            findings.trace(label, complexity_frame(prof, census, ceiling))
            findings.source(x)


def _sturmian_params(params: Params, settings: Settings) -> SturmianParams:
    x0 = params.get("x0")
    return SturmianParams(
        parse_slope(str(params["beta"])),
        x0=parse_slope(str(x0)) if x0 is not None else None,
        precision_bits=settings.precision_bits,
        guard_bits=settings.guard_bits,
    )


def sturmian_exact(params: Params, settings: Settings, findings: Findings) -> None:
    """A Sturmian point has c(n) = n + 1 and a single right-special word per level."""
    n_max = int(params["n_max"])
    coding = _sturmian_params(params, settings)
    z = sturmian(coding)
    table, prof = _analyse(z, n_max, settings)
    levels = prof.saturated_levels()
    findings.check(
        "every level saturates",
        verdict_for(len(levels) == n_max),
        f"{len(levels)} of {n_max} levels saturated",
    )
    _exact_check(findings, "c(n) = n + 1", prof, {n: n + 1 for n in levels})
    census = special_census(table)
    extra = [n for n in levels if census.rs_count(n) != 1]
    findings.check(
        "one right-special word per level",
        verdict_for(not extra, len(levels)),
        f"#RS({extra[0]}) = {census.rs_count(extra[0])}" if extra else "",
    )
    _counting_check(findings, "counting identity", prof, census, exact=True)
    result = morse_hedlund_classify(prof, z)
    findings.check(
        "no Morse-Hedlund trigger",
        verdict_for(result.status is PeriodicityStatus.APERIODIC_THROUGH_HORIZON),
        result.status.value,
    )
    findings.trace("sturmian", complexity_frame(prof, census))
    findings.source(z)


def _word_point(text: str) -> Tuple[bytes, Alphabet]:
    alphabet = Alphabet.from_renderings(sorted(set(text)))
    return Word.parse(alphabet, text).symbols, alphabet


def morse_hedlund(params: Params, settings: Settings, findings: Findings) -> None:
    """Periodic points hit c(p) <= p and have their period recovered; a two-tailed point does not trigger."""
    n_max = int(params["n_max"])
    horizon = int(params["horizon"])
    rows = []
    for text in params["words"]:
        word, alphabet = _word_point(text)
        x = periodic(word, alphabet)
        period = len(word)
        table, prof = _analyse(x, n_max, settings)
        findings.check(
            f"({text})^inf: c(p) <= p", verdict_for(prof.c(period) <= period), f"c({period}) = {prof.c(period)}"
        )
        result = morse_hedlund_classify(prof, x, horizon)
        found = result.right.period if result.right is not None else None
        findings.check(
            f"({text})^inf: period recovered",
            verdict_for(result.status is PeriodicityStatus.EVENTUALLY_PERIODIC and found == period),
            f"{result.status.value}, period {found}",
        )
        rows.append(
            {"point": f"({text})^inf", "trigger": result.trigger, "status": result.status.value, "period": found}
        )
        findings.source(x)

    control = from_tails(b"\x00", b"\x01", Alphabet.integers(0, 1))
    table, prof = _analyse(control, n_max, settings)
    result = morse_hedlund_classify(prof, control, horizon)
    findings.check(
        "0^inf.1^inf: no trigger",
        verdict_for(result.status is PeriodicityStatus.APERIODIC_THROUGH_HORIZON),
        result.status.value,
    )
    left = detect_eventual_periodicity(control, "left", horizon)
    right = detect_eventual_periodicity(control, "right", horizon)
    findings.check(
        "0^inf.1^inf: both tails have period 1",
        verdict_for(left is not None and right is not None and left.period == right.period == 1),
        f"left {left}, right {right}",
    )
    rows.append({"point": "0^inf.1^inf", "trigger": result.trigger, "status": result.status.value, "period": None})
    findings.trace("classification", pd.DataFrame(rows))
    findings.source(control)


def single_minimal_bound(params: Params, settings: Settings, findings: Findings) -> None:
    """
    The limsup floor 3n/2 for recurrent non-minimal points, on the recurrent
    family and on the image of a stitched point under the collapse map.
    """
    alpha = Fraction(3, 2)
    g = GrowthFunction.from_tag(params["growth"])
    x = recurrent_sharp_family(make_schedule(int(params["j"]), 0, g))
    _, prof = _analyse(x, int(params["n_max"]), settings)
    report = bound_report(prof, alpha, None, BoundMode.LIMSUP)
    _bound_check(findings, "recurrent: limsup c(n) - 3n/2 is infinite", report)
    findings.trace("recurrent", complexity_frame(prof, report=report))
    findings.source(x)

    j, i = params["stitched"]
    stitched = stitched_family(make_schedule(int(j), int(i), g))
    image, _ = _collapse_image(stitched, int(params["stitched_n_max"]), settings)
    _, image_prof = _analyse(image, int(params["stitched_n_max"]), settings)
    report = bound_report(image_prof, alpha, None, BoundMode.LIMSUP)
    _bound_check(findings, "collapse image: limsup c(n) - 3n/2 is infinite", report)
    findings.trace("collapse-image", complexity_frame(image_prof, report=report))
    findings.source(image)


def _collapse_image(x: FamilySequence, n_max: int, settings: Settings) -> Tuple[SymbolicSequence, int]:
    """Collapse the last minimal subsystem of ``x`` at the least r where its language is proper."""
    table = build_language(x, n_max, settings.policy())
    for r in range(1, n_max + 1):
        languages = x.minimal_languages(r)
        if languages is None:
            raise DomainError("the minimal subsystems of this point are not known")
        own = languages[-1]
        if not table.words[r] <= own:
            collapse = build_collapse(own, r, x.alphabet, source_words=table.words[r])
            return apply_to_sequence(collapse, x), r
    raise DomainError(f"the minimal language covers the point up to length {n_max}")


def infinite_minimal_collapse(params: Params, settings: Settings, findings: Findings) -> None:
    """A stitched point with an infinite minimal subsystem exceeds 5n/2 infinitely often."""
    n_max = int(params["n_max"])
    g = GrowthFunction.from_tag(params["growth"])
    x = stitched_family(make_schedule(int(params["j"]), int(params["i"]), g))
    table, prof = _analyse(x, n_max, settings)
    image, r = _collapse_image(x, n_max, settings)
    image_table, image_prof = _analyse(image, n_max, settings)

    labels = [c.label for c in minimal_candidates(image_table, image)]
    findings.check("collapse image keeps the fixed point 0^inf", verdict_for("0^inf" in labels), ", ".join(labels))
    report = bound_report(image_prof, Fraction(3, 2), None, BoundMode.LIMSUP)
    _bound_check(findings, "collapse image: limsup c(n) - 3n/2 is infinite", report)
    report = bound_report(prof, Fraction(5, 2), None, BoundMode.LIMSUP)
    _bound_check(findings, "stitched point: limsup c(n) - 5n/2 is infinite", report)
    checks = factor_preimage_check(prof, image_prof, r - 1, 1)
    bad = [c for c in checks if not c.holds]
    findings.check(
        "c_X(n) >= c_image(n - r + 1) + n",
        verdict_for(not bad, len(checks)),
        f"fails at n = {bad[0].n}" if bad else f"{len(checks)} levels, r = {r}",
    )
    findings.trace("stitched", complexity_frame(prof, report=report))
    findings.trace("image", complexity_frame(image_prof))
    findings.source(x, collapse_r=r)


def _band_oracle(params: Sequence[SturmianParams], n: int) -> int:
    words = frozenset().union(*(sturmian_language(p, n) for p in params))
    return len(words) + n - 1


def nonrecurrent_exact(params: Params, settings: Settings, findings: Findings) -> None:
    """Exact complexity of the two nonrecurrent witnesses."""
    n_max = int(params["n_max"])
    for N in params["N"]:
        N = int(N)
        if "i1" in params["cases"]:
            x = nonrecurrent_example("i1", N)
            _, prof = _analyse(x, n_max, settings)
            levels = prof.saturated_levels()
            expected = {n: n + 1 if n <= N else 2 * n - N + 1 for n in levels}
            _exact_check(findings, f"i1, N = {N}: c(n) = n + 1 up to N, then 2n - N + 1", prof, expected)
            frame = complexity_frame(prof)
            frame["expected"] = [expected.get(n) for n in frame["n"]]
            findings.trace(f"i1-N{N}", frame)
            findings.source(x)
        if "i2" in params["cases"]:
            x = nonrecurrent_example("i2", N)
            _, prof = _analyse(x, n_max, settings)
            levels = prof.saturated_levels()
            oracle = {n: _band_oracle(x.sturmians, n) for n in levels}
            _exact_check(findings, f"i2, N = {N}: c(n) = |L_n(Z1) u L_n(Z2)| + n - 1", prof, oracle)
            _exact_check(findings, f"i2, N = {N}: c(n) = 2n up to N", prof, {n: 2 * n for n in levels if n <= N})
            stated = {n: 2 * n if n <= N else 3 * n - N for n in levels}
            agree = sum(1 for n in levels if prof.c(n) == stated[n])
            findings.notes.append(
                f"i2, N = {N}: the closed form 3n - N beyond N agrees at {agree} of {len(levels)} levels; "
                "the union count is used instead"
            )
            frame = complexity_frame(prof)
            frame["union_oracle"] = [oracle.get(n) for n in frame["n"]]
            frame["closed_form"] = [stated.get(n) for n in frame["n"]]
            findings.trace(f"i2-N{N}", frame)
            findings.source(x)


def transitive_census(params: Params, settings: Settings, findings: Findings) -> None:
    """#RS(n) is j + 1 exactly on (n_k, n_k + n_{k-1}] and j elsewhere."""
    n_max = int(params["n_max"])
    g = GrowthFunction.from_tag(params["growth"])
    for j in params["j"]:
        j = int(j)
        x = transitive_family(j, g)
        table, prof = _analyse(x, n_max, settings)
        census = special_census(table)
        ranges = []
        k = 2
        while x.schedule.entry(k) <= n_max:
            ranges.append((x.schedule.entry(k), x.schedule.entry(k) + x.schedule.entry(k - 1)))
            k += 1
        levels = prof.saturated_levels()
        expected = {n: j + 1 if any(lo < n <= hi for lo, hi in ranges) else j for n in levels}
        wrong = [n for n in levels if census.rs_count(n) != expected[n]]
        label = f"transitive-j{j}"
        findings.check(
            f"{label}: #RS(n) = j + 1 exactly on (n_k, n_k + n_(k-1)]",
            verdict_for(not wrong, len(levels)),
            f"#RS({wrong[0]}) = {census.rs_count(wrong[0])}" if wrong else f"{len(ranges)} ranges",
        )
        constant = [n for n in levels if not all(bytes([s]) * n in census.right[n] for s in x.alphabet.symbols)]
        findings.check(
            f"{label}: every constant word is right-special",
            verdict_for(not constant, len(levels)),
            f"fails at n = {constant[0]}" if constant else "",
        )
        report = bound_report(prof, j, g, BoundMode.CEILING)
        _bound_check(findings, f"{label}: c(n) <= jn + g(n)", report)
        frame = complexity_frame(prof, census, report)
        frame["expected_rs"] = [expected.get(n) for n in frame["n"]]
        findings.trace(label, frame)
        findings.source(x)


def factor_preimage(params: Params, settings: Settings, findings: Findings) -> None:
    """The minimal-subsystem factor map loses at least in words at length n."""
    n_max = int(params["n_max"])
    j, i = int(params["j"]), int(params["i"])
    x = stitched_family(make_schedule(j, i, GrowthFunction.from_tag(params["growth"])))
    r = smallest_disjoint_r(x)
    languages = x.minimal_languages(r)
    pi = build_pi(languages, r, x.alphabet)
    image = apply_to_sequence(pi, x)
    _, prof = _analyse(x, n_max, settings)
    image_table, image_prof = _analyse(image, n_max, settings)
    checks = factor_preimage_check(prof, image_prof, r, i)
    bad = [c for c in checks if not c.holds]
    findings.check(
        "c_X(n) >= c_pi(X)(n - r) + in",
        verdict_for(not bad, len(checks)),
        f"fails at n = {bad[0].n}" if bad else f"{len(checks)} levels, r = {r}",
    )
    census = special_census(image_table)
    marks = collapsed_symbols(pi, len(languages))
    levels = image_prof.saturated_levels()
    missing = [
        n for n in levels
        if not all(bytes([a]) * n in census.right[n] and bytes([a]) * n in census.left[n] for a in marks)
    ]
    findings.check(
        "collapsed constant words are right- and left-special in the image",
        verdict_for(not missing, len(levels)),
        f"fails at n = {missing[0]}" if missing else f"{len(marks)} collapsed symbols",
    )
    findings.trace(
        "factor",
        pd.DataFrame(
            {
                "n": [c.n for c in checks],
                "c_source": [c.c_source for c in checks],
                "c_image": [c.c_image for c in checks],
                "bound": [c.bound for c in checks],
            }
        ),
    )
    findings.source(x, r=r)


def right_special_census(params: Params, settings: Settings, findings: Findings) -> None:
    """#RS(n) of the recurrent family lies between j and the schedule bound."""
    n_max = int(params["n_max"])
    for j in params["j"]:
        j = int(j)
        for tag in params["growth"]:
            schedule = make_schedule(j, 0, GrowthFunction.from_tag(tag))
            x = recurrent_sharp_family(schedule)
            table, prof = _analyse(x, n_max, settings)
            census = special_census(table)
            levels = prof.saturated_levels()
            label = f"recurrent-j{j}-{tag}"
            low = [n for n in levels if census.rs_count(n) < j]
            findings.check(f"{label}: #RS(n) >= j", verdict_for(not low, len(levels)),
                           f"#RS({low[0]}) = {census.rs_count(low[0])}" if low else "")
            bounds = {n: census_bound(schedule, n) for n in levels}
            high = [n for n in levels if census.rs_count(n) > bounds[n]]
            findings.check(
                f"{label}: #RS(n) within the schedule bound",
                verdict_for(not high, len(levels)),
                f"#RS({high[0]}) = {census.rs_count(high[0])} > {bounds[high[0]]}" if high else "",
            )
            _counting_check(findings, f"{label}: counting identity", prof, census, exact=True)
            frame = complexity_frame(prof, census)
            frame["bound"] = [bounds.get(n) for n in frame["n"]]
            findings.trace(label, frame)
            findings.source(x, entries=schedule.resolved())


def _staircase_zeros(n: int) -> int:
    """Zeros among the first n symbols to the right of the origin."""
    full = (math.isqrt(8 * n + 1) - 1) // 2
    zeros = ((full + 1) // 2) ** 2
    rest = n - full * (full + 1) // 2
    if (full + 1) % 2 == 1:
        zeros += rest
    return zeros


def staircase_generic(params: Params, settings: Settings, findings: Findings) -> None:
    """The staircase averages to (δ0 + δ1)/2 from the origin."""
    x = staircase()
    spec = WeakMetricSpec(x.alphabet, settings.truncation)
    depth = max(int(params["depth"]), spec.required_depth)
    n = int(params["n"])
    mu = empirical(x, 0, n, depth)
    zero, one = bytes([0]), bytes([1])
    exact = _staircase_zeros(n)
    findings.check("zero frequency matches the block count", verdict_for(mu.freq(zero) == Fraction(exact, n)),
                   f"{exact} zeros in {n}")
    halves = all(0.499 <= mu.freq(w) <= 0.501 for w in (zero, one))
    findings.check("symbol frequencies near 1/2", verdict_for(halves), f"{float(mu.freq(zero)):.6f}")
    switch = mu.freq(zero + one)
    findings.check("freq(01) near 0", verdict_for(switch <= Fraction(1, 500)), f"{float(switch):.6f}")
    pairs = all(0.497 <= mu.freq(w) <= 0.503 for w in (zero * 2, one * 2))
    findings.check("freq(00) and freq(11) near 1/2", verdict_for(pairs), "")
    probe = generic_limit_probe(x, params["lengths"], depth, spec, tolerance=float(params["tolerance"]))
    findings.check("consecutive estimates settle", probe.verdict,
                   ", ".join(f"{d:.3g}" for d in probe.distances))
    m = n // 2
    deviation = shift_average_check(x, m, n - m, depth)
    findings.check("shift-average identity", verdict_for(deviation == 0), str(deviation))
    findings.trace("measure", mu.to_frame())
    findings.trace("probe", pd.DataFrame({"n": list(probe.lengths[1:]), "distance": list(probe.distances)}))
    findings.source(x)


def generic_extraction(params: Params, settings: Settings, findings: Findings) -> None:
    """Generic measure candidates recovered from right-special words."""
    n_max = int(params["n_max"])
    tolerance = float(params["tolerance"])

    x = staircase()
    spec = WeakMetricSpec(x.alphabet, settings.truncation)
    depth = spec.required_depth
    table, prof = _analyse(x, n_max, settings)
    census = special_census(table)
    g = int(params["staircase_g"])
    report = extract_generic_candidates(x, g, census, prof, depth, spec)
    findings.check(
        f"staircase, g = {g}: at most g - 1 candidates",
        verdict_for(0 < len(report.clusters) <= g - 1),
        f"{len(report.clusters)} clusters; {report.diagnostic}",
    )
    for symbol in x.alphabet.symbols:
        target = point_mass(bytes([symbol]), x.alphabet, depth)
        nearest = min((weak_distance(c.representative, target, spec)[0] for c in report.clusters), default=math.inf)
        findings.check(
            f"staircase: a candidate lies near the point mass at {x.alphabet.render(symbol)}",
            verdict_for(nearest <= tolerance + spec.tail_bound),
            f"distance {nearest:.4g}",
        )
    cover = rs_window_cover_check(table, prof, x, census, max_n=int(params["cover_max_n"]))
    _cover_check(findings, "staircase", cover)
    findings.trace("staircase-clusters", _cluster_frame(report, x.alphabet))
    findings.source(x)

    coding = _sturmian_params(params, settings)
    z = sturmian(coding)
    spec = WeakMetricSpec(z.alphabet, settings.truncation)
    depth = spec.required_depth
    table, prof = _analyse(z, n_max, settings)
    census = special_census(table)
    g = int(params["sturmian_g"])
    report = extract_generic_candidates(z, g, census, prof, depth, spec)
    findings.check(
        f"sturmian, g = {g}: exactly one candidate",
        verdict_for(len(report.clusters) == 1),
        f"{len(report.clusters)} clusters",
    )
    cover = rs_window_cover_check(table, prof, z, census, max_n=int(params["cover_max_n"]))
    _cover_check(findings, "sturmian", cover)
    starts = [int(s) for s in params["ergodic_starts"]]
    probe = ergodicity_probe(z, prof, starts, int(params["ergodic_length"]), depth, spec)
    findings.check(
        "sturmian: estimates from different starts agree",
        verdict_for(probe.applicable and probe.largest_distance <= tolerance),
        f"max c(n)/n = {probe.ratio}, spread {probe.largest_distance:.4g}",
    )
    findings.trace("sturmian-clusters", _cluster_frame(report, z.alphabet))
    findings.source(z)


def _cover_check(findings: Findings, label: str, cover: CoverReport) -> None:
    if cover.skipped:
        findings.check(f"{label}: right-special words cover every c(n) + n window", Verdict.INCONCLUSIVE, cover.skipped)
        return
    bad = [c for c in cover.checks if not c.holds]
    findings.check(
        f"{label}: right-special words cover every c(n) + n window",
        verdict_for(not bad, len(cover.checks)),
        f"n = {bad[0].n}: {bad[0].counterexample}" if bad else f"{len(cover.checks)} levels",
    )


def _cluster_frame(report: ExtractionReport, alphabet: Alphabet) -> pd.DataFrame:
    rows = []
    for index, cluster in enumerate(report.clusters):
        for n, word in cluster.members:
            rows.append({"cluster": index, "n": n, "word": alphabet.render_word(word)})
    return pd.DataFrame(rows, columns=["cluster", "n", "word"])
