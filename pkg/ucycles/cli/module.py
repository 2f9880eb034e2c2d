"""Command line interface: ``python -m ucycles <command> ...``."""

from __future__ import annotations

import argparse
import enum
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import ucycles
from ucycles.classes.module import parameter_grid
from ucycles.core import module as core
from ucycles.core.models import (
    AlphabetError,
    CountMismatch,
    EmptyCandidate,
    EnumerationCapExceeded,
    InvalidClassSpec,
    UnsupportedWordLength,
    WordClass,
)
from ucycles.engine import module as engine
from ucycles.engine.dot_utils import DotUtils
from ucycles.engine.models import (
    ExistenceReport,
    MalformedCircuit,
    NotEulerianError,
    UCycle,
)
from ucycles.verifier.module import verify_ucycle

log = logging.getLogger("ucycles.cli")

SWEEP_CAP = 10**6
SWEEP_N_MAX = 7
SWEEP_K_MAX = 6

USAGE_ERRORS = (
    InvalidClassSpec,
    AlphabetError,
    EnumerationCapExceeded,
    UnsupportedWordLength,
    EmptyCandidate,
)
INTERNAL_ERRORS = (CountMismatch, MalformedCircuit, NotEulerianError)


class ExitCode(enum.IntEnum):
    OK = 0
    USAGE = 1
    NEGATIVE = 2
    INCONSISTENT = 3
    CONTRADICTION = 4


class _ParserExit(Exception):
    def __init__(self, status: int):
        super().__init__(status)
        self.status = status


class UCycleParser(argparse.ArgumentParser):
    """Patch ArgumentParser.

    ArgumentParser calls sys.exit(2) on incorrect input, which would both
    take down the caller of ``main`` and clash with our exit codes. This
    subclass saves the message in 'error_message' and unwinds instead.
    """

    error_message: Optional[str] = None

    def error(self, message: str):
        """Save the error message."""
        self.error_message = message
        raise _ParserExit(ExitCode.USAGE) from None

    def exit(self, status: int = 0, message: Optional[str] = None):
        """Make sure the program _does not_ exit."""
        if message:
            sys.stderr.write(message)
        raise _ParserExit(status)


def _sizes(text: str) -> Tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None
    return sizes


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected an integer, got {text!r}"
        ) from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> UCycleParser:
    parser = UCycleParser(
        prog="ucycles",
        description="Universal cycles of word classes.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {ucycles.__version__}"
    )

    common = UCycleParser(add_help=False)
    common.add_argument(
        "-v", "--verbose", action="store_true", help="log debug output to stderr"
    )
    common.add_argument(
        "--json", action="store_true", help="machine-readable output"
    )
    common.add_argument("--cap", type=_positive, help="enumeration cap on k^n")

    class_args = UCycleParser(add_help=False)
    class_args.add_argument("--class", dest="class_name", required=True)
    class_args.add_argument("-n", type=int, required=True, help="word length")
    class_args.add_argument("-k", type=int, help="alphabet size")
    class_args.add_argument("--kv", type=int, help="vowel count (alternating)")
    class_args.add_argument("--kc", type=int, help="consonant count (alternating)")
    class_args.add_argument(
        "--categories", type=_sizes, help="comma-separated category sizes"
    )
    class_args.add_argument("--symbols", help="display symbols, one per letter")

    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    generate = commands.add_parser(
        "generate", parents=[common, class_args], help="emit a U-cycle"
    )
    generate.add_argument(
        "--canonical", action="store_true", help="print the least rotation"
    )

    verify = commands.add_parser(
        "verify", parents=[common, class_args], help="check a candidate U-cycle"
    )
    verify.add_argument("candidate")

    commands.add_parser("count", parents=[common, class_args], help="size of the class")
    commands.add_parser(
        "exists", parents=[common, class_args], help="theorem and engine verdicts"
    )
    commands.add_parser("graph", parents=[common, class_args], help="digraph as DOT")
    commands.add_parser(
        "audit", parents=[common, class_args], help="degrees against the formula"
    )

    sweep = commands.add_parser(
        "sweep", parents=[common], help="theorem/engine concordance over a grid"
    )
    sweep.add_argument("--class", dest="class_name")
    sweep.add_argument("--n-max", type=_positive, default=SWEEP_N_MAX)
    sweep.add_argument("--k-max", type=_positive, default=SWEEP_K_MAX)

    commands.add_parser("classes", parents=[common], help="list registered classes")
    return parser


@dataclass(frozen=True)
class RunConfig:
    command: str
    class_name: Optional[str] = None
    n: Optional[int] = None
    k: Optional[int] = None
    kv: Optional[int] = None
    kc: Optional[int] = None
    categories: Optional[Tuple[int, ...]] = None
    symbols: Optional[str] = None
    cap: int = core.ENUMERATION_CAP
    output: str = "text"
    canonical: bool = False
    candidate: Optional[str] = None
    n_max: int = SWEEP_N_MAX
    k_max: int = SWEEP_K_MAX
    verbose: bool = False

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> RunConfig:
        values = vars(args)
        default_cap = SWEEP_CAP if args.command == "sweep" else core.ENUMERATION_CAP
        return cls(
            command=args.command,
            class_name=values.get("class_name"),
            n=values.get("n"),
            k=values.get("k"),
            kv=values.get("kv"),
            kc=values.get("kc"),
            categories=values.get("categories"),
            symbols=values.get("symbols"),
            cap=values.get("cap") or default_cap,
            output="json" if values.get("json") else "text",
            canonical=values.get("canonical", False),
            candidate=values.get("candidate"),
            n_max=values.get("n_max", SWEEP_N_MAX),
            k_max=values.get("k_max", SWEEP_K_MAX),
            verbose=values.get("verbose", False),
        )

    def word_class(self) -> WordClass:
        """Bind the class and refuse it when k^n is above the cap."""
        word_class = core.make_class(
            self.class_name,
            self.n,
            self.k,
            kv=self.kv,
            kc=self.kc,
            categories=self.categories,
            symbols=self.symbols,
        )
        core.check_cap(word_class, self.cap)
        return word_class


def _write(text: str = ""):
    sys.stdout.write(text + "\n")


def _write_json(data) -> None:
    sys.stdout.write(json.dumps(data, sort_keys=True) + "\n")


def _result(
    word_class: WordClass,
    report: Optional[ExistenceReport] = None,
    cycle: Optional[UCycle] = None,
) -> dict:
    """Result keys shared by ``generate`` and ``exists``, null where unknown."""
    data = {
        **word_class.dump(),
        "length": None,
        "cycle": None,
        "verdict": None,
        "reasons": [],
        "degree_violations": [],
        "components": [],
    }
    if report is not None:
        data.update(report.dump(engine.CENSUS_EDGE_LIMIT))
    if cycle is not None:
        data.update(cycle.dump())
    return data


def _write_report(report: ExistenceReport):
    fmt = report.word_class.alphabet.format
    n, k = report.word_class.n, report.word_class.k
    _write(f"{report.word_class.label}: no U-cycle")
    _write(f"reasons: {', '.join(report.reasons)}")
    for violation in report.degree_violations:
        _write(
            f"  vertex {fmt(violation.vertex)}: "
            f"in={violation.in_degree} out={violation.out_degree}"
        )
    _write(f"components: {report.nontrivial_component_count}")
    for component in report.components:
        words = component.edge_words(n, k)
        shown = " ".join(fmt(word) for word in words[: engine.CENSUS_EDGE_LIMIT])
        more = " ..." if len(words) > engine.CENSUS_EDGE_LIMIT else ""
        _write(f"  #{component.index} ({len(words)} edges): {shown}{more}")


def cmd_generate(cfg: RunConfig) -> ExitCode:
    word_class = cfg.word_class()
    graph = engine.build_digraph(word_class, cap=cfg.cap)
    report = engine.eulerian_check(graph)
    if not report.verdict:
        if cfg.output == "json":
            _write_json(_result(word_class, report))
        else:
            _write_report(report)
        return ExitCode.NEGATIVE

    cycle = engine.emit_cycle(engine.hierholzer(graph, report), graph)
    if cfg.canonical:
        cycle = cycle.canonical()

    result = verify_ucycle(cycle.letters, word_class, cap=cfg.cap)
    if not result.valid:
        log.warning(
            f"Generated cycle for {word_class.label} failed verification: "
            f"{result.reason.describe(word_class.alphabet)}."
        )
        sys.stderr.write(f"error: self-verification failed for {word_class.label}\n")
        return ExitCode.INCONSISTENT

    if cfg.output == "json":
        _write_json(_result(word_class, report, cycle))
    else:
        _write(cycle.format())
    return ExitCode.OK


def cmd_verify(cfg: RunConfig) -> ExitCode:
    word_class = cfg.word_class()
    alphabet = word_class.alphabet
    letters = alphabet.parse(cfg.candidate)
    result = verify_ucycle(letters, word_class, cap=cfg.cap)

    if cfg.output == "json":
        _write_json({**word_class.dump(), **result.dump(alphabet)})
    elif result.valid:
        _write("valid")
    else:
        _write(f"invalid: {result.reason.describe(alphabet)}")
    return ExitCode.OK if result.valid else ExitCode.NEGATIVE


def cmd_count(cfg: RunConfig) -> ExitCode:
    word_class = cfg.word_class()
    count = core.count_class(word_class, cap=cfg.cap)

    if cfg.output == "json":
        _write_json(
            {
                **word_class.dump(),
                "count": count,
                "formula": word_class.closed_count,
                "enumeration": count,
            }
        )
        return ExitCode.OK
    _write(str(count))
    if word_class.closed_count is not None:
        _write(f"formula: {word_class.closed_count}")
    _write(f"enumeration: {count}")
    return ExitCode.OK


def cmd_exists(cfg: RunConfig) -> ExitCode:
    word_class = cfg.word_class()
    theorem = word_class.theorem_verdict

    report: Optional[ExistenceReport] = None
    if word_class.n >= 2:
        report = engine.eulerian_check(engine.build_digraph(word_class, cap=cfg.cap))
    agree = report is None or engine.concordant(word_class, report)

    if cfg.output == "json":
        data = _result(word_class, report)
        if report is None:
            data["reasons"] = ["word_length_below_two"]
        _write_json({**data, "theorem": theorem.dump(), "concordant": agree})
    else:
        marker = " (proof-level)" if theorem.proof_level else ""
        _write(f"theorem: {theorem.verdict.value}{marker} [{theorem.citation}]")
        if report is None:
            _write("engine: n/a (words of length 1)")
        else:
            reasons = f" ({', '.join(report.reasons)})" if report.reasons else ""
            _write(f"engine: {str(report.verdict).lower()}{reasons}")

    if not agree:
        log.warning(
            f"{word_class.label}: theorem says {theorem.verdict.value}, "
            f"engine says {report.verdict}."
        )
        return ExitCode.CONTRADICTION
    return ExitCode.OK


def cmd_graph(cfg: RunConfig) -> ExitCode:
    graph = engine.build_digraph(cfg.word_class(), cap=cfg.cap)
    sys.stdout.write(DotUtils.to_dot(graph))
    return ExitCode.OK


def cmd_audit(cfg: RunConfig) -> ExitCode:
    graph = engine.build_digraph(cfg.word_class(), cap=cfg.cap)
    audit = engine.degree_formula_audit(graph)

    if cfg.output == "json":
        _write_json(audit.dump())
    else:
        fmt = graph.word_class.alphabet.format
        _write(
            f"{graph.word_class.label}: {audit.checked} vertices checked, "
            f"{audit.skipped} skipped, {len(audit.mismatches)} mismatches"
        )
        for mismatch in audit.mismatches:
            _write(
                f"  vertex {fmt(mismatch.vertex)}: in={mismatch.in_degree} "
                f"out={mismatch.out_degree} predicted={mismatch.predicted}"
            )
    return ExitCode.OK if audit.ok else ExitCode.INCONSISTENT


def cmd_sweep(cfg: RunConfig) -> ExitCode:
    names = [cfg.class_name] if cfg.class_name else sorted(core.registry())
    grid = parameter_grid(
        names, range(2, cfg.n_max + 1), range(2, cfg.k_max + 1), cap=cfg.cap
    )

    rows: List[dict] = []
    contradictions = 0
    for word_class in grid:
        report = engine.eulerian_check(engine.build_digraph(word_class, cap=cfg.cap))
        agree = engine.concordant(word_class, report)
        contradictions += not agree
        theorem = word_class.theorem_verdict.verdict
        if cfg.output == "json":
            rows.append(
                {
                    **word_class.dump(),
                    "theorem": theorem.value,
                    "verdict": report.verdict,
                    "concordant": agree,
                }
            )
        else:
            status = "ok" if agree else "CONTRADICTION"
            _write(
                f"{word_class.label}: theorem={theorem.value} "
                f"engine={str(report.verdict).lower()} {status}"
            )
        if not agree:
            log.warning(f"{word_class.label}: theorem {theorem.value} contradicted.")

    if cfg.output == "json":
        _write_json({"cases": rows, "contradictions": contradictions})
    return ExitCode.CONTRADICTION if contradictions else ExitCode.OK


def _required_parameters(binder: core.ClassBinder) -> str:
    if binder.ranking:
        return "-n"
    if binder.partition == core.PARTITION_ALTERNATING:
        return "-n --kv --kc"
    if binder.partition == core.PARTITION_CATEGORIES:
        return "-n --categories"
    return "-n -k"


def cmd_classes(cfg: RunConfig) -> ExitCode:
    binders = core.registry()
    if cfg.output == "json":
        _write_json(
            [
                {
                    "class": name,
                    "parameters": _required_parameters(binder).split(),
                    "summary": binder.summary,
                }
                for name, binder in sorted(binders.items())
            ]
        )
        return ExitCode.OK
    for name, binder in sorted(binders.items()):
        _write(f"{name:<16} {_required_parameters(binder):<18} {binder.summary}")
    return ExitCode.OK


COMMANDS: Dict[str, Callable[[RunConfig], ExitCode]] = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "count": cmd_count,
    "exists": cmd_exists,
    "graph": cmd_graph,
    "audit": cmd_audit,
    "sweep": cmd_sweep,
    "classes": cmd_classes,
}


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger("ucycles").setLevel(
        logging.DEBUG if verbose else logging.WARNING
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ParserExit as exc:
        # Subparsers are separate instances, the message is on one of them.
        if exc.status == ExitCode.USAGE:
            message = _parser_error(parser) or "invalid arguments"
            sys.stderr.write(f"usage error: {message}\n")
        return int(exc.status)

    cfg = RunConfig.from_namespace(args)
    _configure_logging(cfg.verbose)

    try:
        return int(COMMANDS[cfg.command](cfg))
    except USAGE_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return int(ExitCode.USAGE)
    except INTERNAL_ERRORS as exc:
        log.warning(f"Internal inconsistency: {exc}")
        sys.stderr.write(f"error: {exc}\n")
        return int(ExitCode.INCONSISTENT)


def _parser_error(parser: argparse.ArgumentParser) -> Optional[str]:
    if getattr(parser, "error_message", None):
        return parser.error_message
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for subparser in action.choices.values():
                message = _parser_error(subparser)
                if message:
                    return message
    return None
