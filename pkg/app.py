"""
Subshift Complexity Workbench - command line entry point.

Generate sequences, map them through block codes, tabulate their languages,
estimate their measures and run the verification experiments of the catalog.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from src.calculations.complexity import (
    BoundSpec,
    Verdict,
    bound_report,
    check_counting,
    complexity_frame,
    minimal_candidates,
    morse_hedlund_classify,
    profile,
    render_exact,
    special_census,
)
from src.calculations.measures import (
    WeakMetricSpec,
    empirical,
    extract_generic_candidates,
    generic_limit_probe,
)
from src.calculations.utils import (
    format_error_message,
    parse_int_list,
    sanitize_token,
    truncate_text,
    validate_family_params,
)
from src.components.block_maps import (
    apply_to_sequence,
    build_collapse,
    build_pi,
    build_reduction,
    smallest_disjoint_r,
)
from src.components.language import build_language
from src.components.words import Alphabet, DomainError, SymbolicSequence, Word
from src.experiments.catalog import CATALOG, select_experiment
from src.experiments.harness import run_experiment
from src.experiments.report import Findings, combine
from src.generators.families import (
    from_tails,
    nonrecurrent_example,
    periodic,
    recurrent_sharp_family,
    staircase,
    stitched_family,
    transitive_family,
)
from src.generators.schedule import ExponentSchedule, GrowthFunction, make_schedule
from src.generators.sturmian import SturmianParams, parse_slope, sturmian
from src.integrations.config import FORMATS, Settings, load_settings
from src.integrations.sequence_io import (
    atomic_write,
    dump_json,
    frame_text,
    read_rule,
    read_sequence,
    table_words,
    write_frame,
    write_sequence,
)

logger = logging.getLogger("workbench")

FAMILIES = ("recurrent", "stitched", "transitive", "nonrecurrent", "staircase", "sturmian", "periodic", "tails")


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _add_source_options(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--in", "--input", dest="input", help="Sequence file to read.")
    group.add_argument("--family", choices=FAMILIES, help="Generated family to use.")
    parser.add_argument("--j", type=int, default=2, help="Number of run letters / minimal subsystems.")
    parser.add_argument("--i", type=int, default=0, help="Number of stitched Sturmian letters.")
    parser.add_argument("--growth", default="sqrt", help="Growth function: log2, sqrt or linear.")
    parser.add_argument("--margin", type=int, default=1, help="Slack added to every schedule constraint.")
    parser.add_argument("--case", choices=["i1", "i2"], default="i1", help="Nonrecurrent witness.")
    parser.add_argument("--N", type=int, default=10, help="Band index of the nonrecurrent witnesses.")
    parser.add_argument("--beta", default="golden", help="Sturmian slope: golden, silver, band:N or a decimal.")
    parser.add_argument("--x0", default=None, help="Sturmian starting point (default beta/2).")
    parser.add_argument("--word", default="01", help="Period of the periodic point, or 'left,right' tails.")


def _add_window_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--length", type=int, default=4096, help="Number of symbols to write.")
    parser.add_argument("--origin", type=int, default=0, help="Position of index 0 within the written window.")
    parser.add_argument("--lo", type=int, default=None, help="First index of the window (overrides --origin).")
    parser.add_argument("--hi", type=int, default=None, help="Last index of the window (overrides --length).")


def _window(args: argparse.Namespace) -> Tuple[int, int]:
    lo = -args.origin if args.lo is None else args.lo
    hi = lo + args.length - 1 if args.hi is None else args.hi
    if hi < lo:
        raise DomainError(f"empty window [{lo}, {hi}]")
    return lo, hi


def build_source(args: argparse.Namespace, settings: Settings) -> SymbolicSequence:
    """The sequence named on the command line: a file or a generated family."""
    positional = getattr(args, "family_name", None)
    if positional and (args.family or args.input):
        raise DomainError("name the source once: a positional family, --family or --in")
    if args.input:
        return read_sequence(args.input)
    family = args.family or positional
    if family is None:
        raise DomainError("name a family or an input file with --in")
    if family in ("recurrent", "stitched"):
        i = args.i if family == "stitched" else 0
        is_valid, error_msg = validate_family_params(args.j, i)
        if not is_valid:
            raise DomainError(error_msg)
        schedule = make_schedule(args.j, i, GrowthFunction.from_tag(args.growth), args.margin)
        return stitched_family(schedule) if i else recurrent_sharp_family(schedule)
    if family == "transitive":
        return transitive_family(args.j, GrowthFunction.from_tag(args.growth), args.margin)
    if family == "nonrecurrent":
        return nonrecurrent_example(args.case, args.N)
    if family == "staircase":
        return staircase()
    if family == "sturmian":
        x0 = parse_slope(args.x0) if args.x0 else None
        params = SturmianParams(
            parse_slope(args.beta), x0=x0, precision_bits=settings.precision_bits, guard_bits=settings.guard_bits
        )
        return sturmian(params)
    text = sanitize_token(args.word)
    if family == "tails":
        left, _, right = text.partition(",")
        alphabet = Alphabet.from_renderings(sorted(set(left + right)))
        return from_tails(Word.parse(alphabet, left).symbols, Word.parse(alphabet, right).symbols, alphabet)
    if not text:
        raise DomainError("the periodic point needs a nonempty --word")
    alphabet = Alphabet.from_renderings(sorted(set(text)))
    return periodic(Word.parse(alphabet, text).symbols, alphabet)


def _emit(frame: pd.DataFrame, out: Optional[str], fmt: str) -> None:
    if out:
        write_frame(frame, out, fmt)
        print(f"Wrote {len(frame)} rows to {out}")
    else:
        sys.stdout.write(frame_text(frame, fmt))


def cmd_gen(args: argparse.Namespace, settings: Settings) -> int:
    seq = build_source(args, settings)
    schedule: Optional[Dict[str, Any]] = None
    family_schedule = getattr(seq, "schedule", None)
    if isinstance(family_schedule, ExponentSchedule):
        schedule = dict(family_schedule.describe(), entries=family_schedule.resolved())
    elif family_schedule is not None:
        schedule = family_schedule.describe()
    lo, hi = _window(args)
    write_sequence(seq, args.out, lo, hi, schedule)
    print(f"Wrote {hi - lo + 1} symbols of {seq.provenance.family} to {args.out}")
    return 0


def cmd_map(args: argparse.Namespace, settings: Settings) -> int:
    seq = build_source(args, settings)
    if args.kind == "custom":
        if not args.rule:
            raise DomainError("custom maps need --rule")
        f = read_rule(args.rule, seq.alphabet, memory=args.memory)
    elif args.kind == "reduction":
        f = build_reduction(seq.alphabet, seq.alphabet.parse(args.marker))
    else:
        r = args.r or (smallest_disjoint_r(seq) if args.kind == "pi" else 1)
        languages = seq.minimal_languages(r)
        if languages is None:
            raise DomainError("the minimal subsystems of this sequence are not known")
        if args.kind == "pi":
            f = build_pi(languages, r, seq.alphabet)
        else:
            table = build_language(seq, r, settings.policy())
            f = build_collapse(languages[-1], r, seq.alphabet, source_words=table.words[r])
    image = apply_to_sequence(f, seq)
    lo, hi = _window(args)
    write_sequence(image, args.out, lo, hi)
    print(f"Wrote the {f.name} image (width {f.width}) to {args.out}")
    return 0


def _write_verdict(block: Dict[str, Any], out: Optional[str]) -> None:
    """The verdict block goes next to ``out`` as ``<out>.verdict.json``, or to stderr."""
    text = dump_json(block)
    if out:
        atomic_write(out + ".verdict.json", text)
    else:
        sys.stderr.write(text)


def cmd_analyze(args: argparse.Namespace, settings: Settings) -> int:
    seq = build_source(args, settings)
    n_max = args.nmax or settings.n_max
    table = build_language(seq, n_max, settings.policy())
    prof = profile(table)
    census = special_census(table)
    findings = Findings()
    saturated = len(prof.saturated_levels())
    if saturated < n_max:
        print(f"Warning: {n_max - saturated} of {n_max} levels did not saturate within the cap", file=sys.stderr)
        findings.check("levels saturate within the cap", Verdict.INCONCLUSIVE, f"{saturated} of {n_max}")
    counting = check_counting(prof, census)
    broken = [c.n for c in counting if not (c.holds and c.exact)]
    if not counting:
        findings.check("counting identity", Verdict.INCONCLUSIVE, "no saturated pair of levels")
    else:
        detail = f"fails at n = {broken}" if broken else f"{len(counting)} levels"
        findings.check("counting identity", Verdict.FAIL if broken else Verdict.PASS, detail)
    if args.report == "profile":
        _emit(complexity_frame(prof, census), args.out, settings.format)
    elif args.report == "special":
        render = table.alphabet.render_word
        rows = [
            {
                "n": n,
                "word": render(w),
                "extensions": " ".join(table.alphabet.render(s) for s in sorted(ext)),
                "maximal": w in census.maximal_right.get(n, frozenset()),
            }
            for n in range(1, n_max + 1)
            for w, ext in sorted(census.right[n].items())
        ]
        _emit(pd.DataFrame(rows, columns=["n", "word", "extensions", "maximal"]), args.out, settings.format)
    elif args.report == "bounds":
        if not args.bound:
            raise DomainError("the bounds report needs --bound alpha,g,mode")
        spec = BoundSpec.parse(args.bound)
        report = bound_report(prof, spec.alpha, spec.g, spec.mode)
        print(f"{spec.describe()}: {report.verdict.value}", file=sys.stderr)
        checkpoints = ", ".join(f"{n}: {render_exact(v)}" for n, v in report.checkpoints)
        findings.check(spec.describe(), report.verdict, f"horizon {report.horizon}; {checkpoints}")
        _emit(complexity_frame(prof, report=report), args.out, settings.format)
    elif args.report == "minimal":
        rows = [{"label": c.label, "status": c.status} for c in minimal_candidates(table, seq)]
        _emit(pd.DataFrame(rows, columns=["label", "status"]), args.out, settings.format)
    elif args.report == "periodicity":
        result = morse_hedlund_classify(prof, seq)
        print(f"{result.status.value} (trigger {result.trigger}, right {result.right}, left {result.left})")
    else:
        text = dump_json(table_words(table))
        if args.out:
            atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
    verdict = combine(c.verdict for c in findings.checks)
    block = {
        "report": args.report,
        "n_max": n_max,
        "saturated": saturated,
        "verdict": verdict.value,
        "checks": [c.as_dict() for c in findings.checks],
    }
    _write_verdict(block, args.out)
    return {"pass": 0, "fail": 1}.get(verdict.value, 2)


def cmd_measure(args: argparse.Namespace, settings: Settings) -> int:
    seq = build_source(args, settings)
    spec = WeakMetricSpec(seq.alphabet, settings.truncation)
    depth = args.depth or spec.required_depth
    if args.action == "extract":
        if args.g is None:
            raise DomainError("extraction needs --g")
        n_max = args.nmax or 30
        table = build_language(seq, n_max, settings.policy())
        report = extract_generic_candidates(
            seq, args.g, special_census(table), profile(table), depth, spec, threshold=args.tol
        )
        print(report.diagnostic, file=sys.stderr)
        rows = [
            {"cluster": index, "n": n, "word": seq.alphabet.render_word(word)}
            for index, cluster in enumerate(report.clusters)
            for n, word in cluster.members
        ]
        _emit(pd.DataFrame(rows, columns=["cluster", "n", "word"]), args.out, settings.format)
        return 0
    lengths = parse_int_list(args.lengths) if args.lengths else [args.length]
    if len(lengths) > 1:
        report = generic_limit_probe(seq, lengths, depth, spec, start=args.start)
        frame = pd.DataFrame({"n": list(report.lengths[1:]), "distance": list(report.distances)})
        print(f"consecutive estimates: {report.verdict.value} (tail {report.tail_bound:.3g})", file=sys.stderr)
        _emit(frame, args.out, settings.format)
        return {"pass": 0, "fail": 1}.get(report.verdict.value, 2)
    mu = empirical(seq, args.start, lengths[0], depth)
    _emit(mu.to_frame(), args.out, settings.format)
    return 0


def _parse_params(items: List[str]) -> Dict[str, Any]:
    """``key=value`` pairs; values are read as JSON when they parse, as text otherwise."""
    params: Dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise DomainError(f"parameters must read key=value, got {item!r}")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    extra = _parse_params(args.param or [])
    if args.name == "all":
        if extra:
            raise DomainError("--param applies to a single experiment")
        selected = [(spec, {}) for spec in CATALOG]
    else:
        spec, implied = select_experiment(args.name)
        selected = [(spec, {**implied, **extra})]
    bundles = []
    for spec, overrides in selected:
        bundle = run_experiment(spec, settings, overrides)
        folder = bundle.write(settings.out_dir, settings.format)
        print(f"{spec.tag} {spec.name}: {bundle.verdict.value} ({len(bundle.findings.checks)} checks) -> {folder}")
        for check in bundle.findings.checks:
            if check.verdict.value != "pass":
                print(f"  {check.verdict.value}: {check.name} {truncate_text(check.detail, 100)}")
        bundles.append(bundle)
    overall = combine(b.verdict for b in bundles)
    return {"pass": 0, "fail": 1}.get(overall.value, 2)


def cmd_list(args: argparse.Namespace, settings: Settings) -> int:
    for spec in CATALOG:
        print(f"{spec.tag:14} {spec.name:27} {truncate_text(spec.claim, 80)}")
        print(f"{'':42} anchor: \"{spec.anchor}\"")
        if args.defaults:
            print(f"{'':42} defaults: {json.dumps(spec.defaults, sort_keys=True)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--cap", type=int, default=None, help="Largest window, in symbols, a language table may read.")
    parser.add_argument("--out-dir", default=None, help="Directory for report bundles.")
    parser.add_argument("--format", choices=FORMATS, default=None, help="Trace format.")
    parser.add_argument("--settings", default=None, help="Settings file (default .workbench/settings.toml).")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Write a window of a sequence to a file.")
    gen.add_argument("family_name", nargs="?", choices=FAMILIES, metavar="FAMILY", help="Family to generate.")
    _add_source_options(gen, required=False)
    gen.add_argument("--out", required=True, help="Sequence file to write.")
    _add_window_options(gen)
    gen.set_defaults(handler=cmd_gen)

    mapper = sub.add_parser("map", help="Apply a block map and write the image.")
    mapper.add_argument("kind", choices=["pi", "collapse", "reduction", "custom"])
    _add_source_options(mapper)
    mapper.add_argument("--out", required=True, help="Sequence file to write.")
    mapper.add_argument("--rule", help="TSV rule table for custom maps.")
    mapper.add_argument("--memory", type=int, default=0, help="Memory of a custom map.")
    mapper.add_argument("--r", type=int, default=None, help="Window length of pi or collapse.")
    mapper.add_argument("--marker", default="1", help="Symbol sent to 0 by the reduction map.")
    _add_window_options(mapper)
    mapper.set_defaults(handler=cmd_map)

    analyze = sub.add_parser("analyze", help="Tabulate the language and report on it.")
    _add_source_options(analyze)
    analyze.add_argument("--nmax", type=int, default=None, help="Largest word length (default NMAX).")
    analyze.add_argument(
        "--report", choices=["profile", "special", "bounds", "minimal", "periodicity", "words"], default="profile"
    )
    analyze.add_argument("--bound", help="alpha,g,mode for the bounds report, e.g. 3/2,0,limsup.")
    analyze.add_argument("--out", help="Write the report here instead of stdout.")
    analyze.set_defaults(handler=cmd_analyze)

    measure = sub.add_parser("measure", help="Empirical cylinder frequencies.")
    measure.add_argument("action", nargs="?", choices=["extract"], help="'extract' recovers generic candidates.")
    _add_source_options(measure)
    measure.add_argument("--start", type=int, default=0)
    measure.add_argument("--length", type=int, default=100000, help="Sample length of a single estimate.")
    measure.add_argument(
        "--lengths", help="Comma separated sample lengths; two or more report the distances between estimates."
    )
    measure.add_argument("--depth", type=int, default=None, help="Cylinder depth (default: what the metric needs).")
    measure.add_argument("--g", type=int, default=None, help="Right-special threshold g for extraction.")
    measure.add_argument("--tol", type=float, default=None, help="Cluster threshold for extraction.")
    measure.add_argument("--nmax", type=int, default=None, help="Largest word length for extraction (default 30).")
    measure.add_argument("--out", help="Write the table here instead of stdout.")
    measure.set_defaults(handler=cmd_measure)

    verify = sub.add_parser("verify", help="Run a catalog experiment and write its report bundle.")
    verify.add_argument("name", help="Experiment tag or name (T4.1-i2 selects a variant), or 'all'.")
    verify.add_argument("--param", action="append", help="Override a default parameter: key=value (JSON values).")
    verify.set_defaults(handler=cmd_verify)

    listing = sub.add_parser("list", help="Print the experiment catalog.")
    listing.add_argument("--defaults", action="store_true", help="Show default parameters too.")
    listing.set_defaults(handler=cmd_list)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        settings = load_settings(args.settings) if args.settings else load_settings()
        settings = settings.with_overrides(cap=args.cap, out_dir=args.out_dir, format=args.format)
        return args.handler(args, settings)
    except (DomainError, OSError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        print(format_error_message(e), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
