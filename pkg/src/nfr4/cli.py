"""Command line front end.

Commands: check, metrics, matrix, critical, report.  Human output goes
to stdout; diagnostics and errors go to stderr.  Exit codes: 0 success
(warnings pass unless --strict), 1 check failed, 2 model invalid for
analysis, 3 analysis precondition violated (e.g. no NFRs), 64 bad usage.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .analysis import (
    EmptyMatrixError,
    EmptyModelError,
    InvalidModelError,
    ThresholdMode,
    build_traceability_matrix,
    compute_mcr,
    rank_criticality,
    score_checklist,
)
from .dsl import ParseError, parse
from .model import Diagnostic, Model, validate_structure
from .report import (
    build_bundle,
    export_json,
    format_ratio,
    mcr_line,
    render_matrix_table,
    render_summary,
    validation_line,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_MODEL = 2
EXIT_PRECONDITION = 3
EXIT_USAGE = 64


@dataclass(frozen=True, slots=True)
class CliConfig:
    command: str
    input_path: str
    format: str = "text"
    mode: ThresholdMode = ThresholdMode.mean()
    strict: bool = False
    legend: bool = True


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for bad models."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_mode(text: str) -> ThresholdMode:
    if text == "mean":
        return ThresholdMode.mean()
    if text.startswith("top_k="):
        return ThresholdMode.top_k(int(text[len("top_k="):]))
    if text.startswith("absolute="):
        return ThresholdMode.absolute(Fraction(text[len("absolute="):]))
    raise ValueError(f"expected mean, top_k=K or absolute=T, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nfr4",
                     description="Four-layer NFR model analysis")
    commands = parser.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("input", help="model file, or - for stdin")
        return sub

    check = add_command("check", "parse and lint a model")
    check.add_argument("--strict", action="store_true",
                       help="treat warnings as errors")

    add_command("metrics", "print completeness and validation metrics")

    matrix = add_command("matrix", "print the NFR x goal traceability table")
    matrix.add_argument("--mode", type=_parse_mode, default=ThresholdMode.mean(),
                        help="critical threshold: mean, top_k=K or absolute=T")
    matrix.add_argument("--legend", action=argparse.BooleanOptionalAction,
                        default=True, help="append the goal legend")

    critical = add_command("critical", "print NFR scores and the critical set")
    critical.add_argument("--mode", type=_parse_mode,
                          default=ThresholdMode.mean(),
                          help="critical threshold: mean, top_k=K or absolute=T")

    report = add_command("report", "print the full analysis report")
    report.add_argument("--format", choices=("text", "markdown", "json"),
                        default="text")
    report.add_argument("--mode", type=_parse_mode,
                        default=ThresholdMode.mean(),
                        help="critical threshold: mean, top_k=K or absolute=T")
    return parser


def _config_from_args(namespace: argparse.Namespace) -> CliConfig:
    return CliConfig(
        command=namespace.command,
        input_path=namespace.input,
        format=getattr(namespace, "format", "text"),
        mode=getattr(namespace, "mode", ThresholdMode.mean()),
        strict=getattr(namespace, "strict", False),
        legend=getattr(namespace, "legend", True),
    )


def _display_path(path: str) -> str:
    return "<stdin>" if path == "-" else path


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _print_parse_errors(errors: list[ParseError], path: str) -> None:
    where = _display_path(path)
    for error in errors:
        print(f"{where}:{error.span.line}:{error.span.column}:"
              f" {error.kind}: {error.message}", file=sys.stderr)


def _print_diagnostics(diagnostics: list[Diagnostic], path: str) -> None:
    where = _display_path(path)
    for diagnostic in diagnostics:
        location = f"{where}:{diagnostic.source_line}" \
            if diagnostic.source_line else where
        print(f"{location}: {diagnostic.severity} {diagnostic.rule_id}:"
              f" {diagnostic.message}", file=sys.stderr)


def _load(path: str, failure_code: int) -> Model | int:
    """Read and parse the input, or return the exit code to use."""
    try:
        raw = _read_input(path)
    except OSError as exc:
        print(f"error: cannot read {_display_path(path)}: {exc}",
              file=sys.stderr)
        return failure_code
    result = parse(raw, source_path=None if path == "-" else path)
    if isinstance(result, list):
        _print_parse_errors(result, path)
        return failure_code
    return result


def _cmd_check(config: CliConfig) -> int:
    model = _load(config.input_path, EXIT_CHECK_FAILED)
    if isinstance(model, int):
        return model
    diagnostics = validate_structure(model)
    _print_diagnostics(diagnostics, config.input_path)
    if any(d.severity == "error" for d in diagnostics):
        return EXIT_CHECK_FAILED
    if diagnostics and config.strict:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _load_gated(config: CliConfig) -> Model | int:
    """Load a model for analysis; error diagnostics refuse it (exit 2)."""
    model = _load(config.input_path, EXIT_INVALID_MODEL)
    if isinstance(model, int):
        return model
    diagnostics = validate_structure(model)
    _print_diagnostics(diagnostics, config.input_path)
    if any(d.severity == "error" for d in diagnostics):
        return EXIT_INVALID_MODEL
    return model


def _cmd_metrics(config: CliConfig) -> int:
    model = _load_gated(config)
    if isinstance(model, int):
        return model
    try:
        completeness = compute_mcr(model)
    except EmptyModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(mcr_line(completeness))
    print(validation_line(score_checklist(model)))
    return EXIT_OK


def _cmd_matrix(config: CliConfig) -> int:
    model = _load_gated(config)
    if isinstance(model, int):
        return model
    try:
        matrix = build_traceability_matrix(model)
        criticality = rank_criticality(matrix, config.mode)
    except InvalidModelError:
        return EXIT_INVALID_MODEL
    except EmptyMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(render_matrix_table(matrix, criticality, legend=config.legend),
          end="")
    return EXIT_OK


def _cmd_critical(config: CliConfig) -> int:
    model = _load_gated(config)
    if isinstance(model, int):
        return model
    try:
        matrix = build_traceability_matrix(model)
        criticality = rank_criticality(matrix, config.mode)
    except InvalidModelError:
        return EXIT_INVALID_MODEL
    except EmptyMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    for nfr_id, score in zip(criticality.nfr_ids, criticality.scores):
        print(f"{nfr_id}: {score}")
    print(f"threshold ({criticality.threshold_mode}):"
          f" {format_ratio(criticality.threshold_value)}")
    print(f"critical: {', '.join(criticality.critical)}".rstrip())
    return EXIT_OK


def _cmd_report(config: CliConfig) -> int:
    model = _load_gated(config)
    if isinstance(model, int):
        return model
    try:
        bundle = build_bundle(model, config.mode)
    except EmptyModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InvalidModelError:
        return EXIT_INVALID_MODEL
    if config.format == "json":
        print(export_json(bundle))
    else:
        print(render_summary(bundle, config.format), end="")
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "metrics": _cmd_metrics,
    "matrix": _cmd_matrix,
    "critical": _cmd_critical,
    "report": _cmd_report,
}


def run(config: CliConfig) -> int:
    """Execute one command; returns the process exit code."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        print(f"error: unknown command {config.command!r}", file=sys.stderr)
        return EXIT_USAGE
    return handler(config)


def main(argv: list[str] | None = None) -> None:
    namespace = build_parser().parse_args(argv)
    sys.exit(run(_config_from_args(namespace)))


if __name__ == "__main__":
    main()
