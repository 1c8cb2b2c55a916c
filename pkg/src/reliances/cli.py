"""Command-line interface: ``reliances {analyze,stratify,mfa,bench} FILE ...``.

Exit codes: 0 success or "yes", 1 "no", 2 unknown or resource limit hit,
64 usage error (including unreadable input), 65 rule-file parse error.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from typing import List, Optional, Sequence, TextIO

from .engine import KINDS, POSITIVE, RESTRAINT, VARIANTS, AnalysisOptions, compute_reliances
from .graph import (
    DependencyGraph,
    Verdict,
    decompose_ruleset,
    graph_summary,
    is_core_stratified,
    stratification_witness,
    to_dot,
)
from .mfa import MfaLimits, MfaVerdict, is_mfa, mfa_by_components
from .parser import ParseError, RuleSet, format_rule, load_rules

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text!r}")
    return value


def _csv_choices(allowed: Sequence[str]):
    def parse(text: str) -> List[str]:
        items = [s.strip() for s in text.split(",") if s.strip()]
        bad = [s for s in items if s not in allowed]
        if bad or not items:
            raise argparse.ArgumentTypeError(
                f"expected a comma-separated subset of {','.join(allowed)}, got {text!r}"
            )
        return list(dict.fromkeys(items))

    return parse


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=sorted(VARIANTS), default="A")
    p.add_argument("--threads", type=_positive_int, default=1, help="worker processes")
    p.add_argument(
        "--pair-timeout-ms", type=_positive_int, default=None, help="deadline per rule pair"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reliances", description="Reliances between existential rules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="compute positive reliances and restraints")
    p.add_argument("file")
    p.add_argument("--positive", action="store_true", help="compute positive reliances")
    p.add_argument("--restraints", action="store_true", help="compute restraints")
    _add_engine_flags(p)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out", default=None, help="write to this path instead of stdout")

    p = sub.add_parser("stratify", help="decide core stratification")
    p.add_argument("file")
    p.add_argument("--pieces", action="store_true", help="split rule heads into pieces first")
    _add_engine_flags(p)

    p = sub.add_parser("mfa", help="decide model-faithful acyclicity")
    p.add_argument("file")
    p.add_argument("--by-components", action="store_true")
    p.add_argument("--depth-limit", type=_positive_int, default=MfaLimits.depth)
    p.add_argument("--fact-limit", type=_positive_int, default=MfaLimits.facts)
    _add_engine_flags(p)

    p = sub.add_parser("bench", help="time the optimisation variants")
    p.add_argument("file")
    p.add_argument("--variants", type=_csv_choices(list(VARIANTS)), default=list(VARIANTS))
    p.add_argument("--kinds", type=_csv_choices(list(KINDS)), default=list(KINDS))
    p.add_argument("--repeat", type=_positive_int, default=1)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--pair-timeout-ms", type=_positive_int, default=None)
    return parser


def _load(path: str) -> RuleSet:
    try:
        return load_rules(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _options(args, kinds=KINDS, variant: Optional[str] = None) -> AnalysisOptions:
    timeout = args.pair_timeout_ms / 1000 if args.pair_timeout_ms else None
    return AnalysisOptions(
        variant=variant or args.variant,
        kinds=tuple(kinds),
        pair_timeout=timeout,
        worker_count=args.threads,
    )


def cmd_analyze(args, out: TextIO) -> int:
    rs = _load(args.file)
    kinds = [k for k, on in ((POSITIVE, args.positive), (RESTRAINT, args.restraints)) if on]
    report = compute_reliances(rs, _options(args, kinds or KINDS))
    if args.format == "dot":
        text = to_dot(DependencyGraph.from_report(report), rs)
    else:
        text = json.dumps(graph_summary(report, timings=False), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    counts = " ".join(
        f"{k}={len(report.edges_of(k))}" for k in report.kinds
    )
    print(
        f"edges: {counts} unknown={len(report.unknown)} "
        f"time={report.elapsed * 1000:.1f}ms",
        file=sys.stderr,
    )
    return EXIT_OK


_VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_NO, Verdict.UNKNOWN: EXIT_UNKNOWN}


def cmd_stratify(args, out: TextIO) -> int:
    rs = _load(args.file)
    if args.pieces:
        rs, _ = decompose_ruleset(rs)
    report = compute_reliances(rs, _options(args))
    g = DependencyGraph.from_report(report)
    verdict = is_core_stratified(g)
    out.write(f"core-stratified: {verdict}\n")
    if verdict == Verdict.NO:
        a, b = stratification_witness(g)
        out.write(f"witness: {a} restrains {b}\n")
        out.write(f"  {a}: {format_rule(rs[a])}\n  {b}: {format_rule(rs[b])}\n")
    return _VERDICT_EXIT[verdict]


_MFA_TEXT = {
    MfaVerdict.MFA: ("yes", EXIT_OK),
    MfaVerdict.NOT_MFA: ("no", EXIT_NO),
    MfaVerdict.RESOURCE_EXCEEDED: ("resource-exceeded", EXIT_UNKNOWN),
}


def cmd_mfa(args, out: TextIO) -> int:
    rs = _load(args.file)
    limits = MfaLimits(depth=args.depth_limit, facts=args.fact_limit)
    if args.by_components:
        report = compute_reliances(rs, _options(args, [POSITIVE]))
        result = mfa_by_components(rs, DependencyGraph.from_report(report), limits)
    else:
        result = is_mfa(rs, limits)
    text, code = _MFA_TEXT[result.verdict]
    out.write(f"mfa: {text}\n")
    if args.by_components:
        out.write(f"components: {result.components}\n")
    if result.witness is not None:
        out.write(f"cyclic term: {result.witness} (depth {result.witness.depth})\n")
    return code


def cmd_bench(args, out: TextIO) -> int:
    rs = _load(args.file)
    out.write("variant,kind,edges,unknown,candidates,cache_hits,millis\n")
    for variant in args.variants:
        for kind in args.kinds:
            times = []
            for _ in range(args.repeat):
                report = compute_reliances(rs, _options(args, [kind], variant))
                times.append(report.elapsed * 1000)
            out.write(
                f"{variant},{kind},{len(report.edges)},{len(report.unknown)},"
                f"{report.candidates},{report.cache_hits},{statistics.median(times):.3f}\n"
            )
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "stratify": cmd_stratify,
    "mfa": cmd_mfa,
    "bench": cmd_bench,
}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"reliances: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"reliances: {args.file}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
