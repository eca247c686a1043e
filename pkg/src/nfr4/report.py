"""Rendering: matrix tables, human summaries and JSON export.

Every renderer is deterministic -- the same bundle yields byte-identical
output -- and text output ends with exactly one trailing newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from fractions import Fraction

from .analysis import (
    ChecklistScore,
    CompletenessResult,
    CriticalityReport,
    ThresholdMode,
    TraceabilityMatrix,
    build_traceability_matrix,
    compute_mcr,
    rank_criticality,
    score_checklist,
)
from .model import CHECKLIST_SIZE, Diagnostic, Model, validate_structure

_QUANTUM = Decimal("0.0001")


def format_ratio(value: Fraction) -> str:
    """Fixed four-decimal rendering of an exact ratio."""
    quotient = Decimal(value.numerator) / Decimal(value.denominator)
    return str(quotient.quantize(_QUANTUM, rounding=ROUND_HALF_UP))


def mcr_line(completeness: CompletenessResult) -> str:
    n_c, n_nv = completeness.n_c, completeness.n_nv
    return f"MCR = {n_c} / [{n_c}+{n_nv}] = {format_ratio(completeness.mcr)}"


def validation_line(score: ChecklistScore) -> str:
    label = score.subject if score.subject is not None else "validation"
    return (f"{label}: {score.yes_count}/{CHECKLIST_SIZE}"
            f" = {format_ratio(score.metric)}")


@dataclass(frozen=True, slots=True)
class ReportBundle:
    """Everything the report renderers need, computed from one model."""

    model: Model
    diagnostics: tuple[Diagnostic, ...]
    completeness: CompletenessResult
    whole_model_score: ChecklistScore
    per_nfr_scores: tuple[ChecklistScore, ...]
    matrix: TraceabilityMatrix
    criticality: CriticalityReport


def build_bundle(model: Model, mode: ThresholdMode | None = None) -> ReportBundle:
    """Run the full analysis for one model.

    Raises EmptyModelError on a model without NFRs and InvalidModelError
    on one with error-severity diagnostics; warnings ride along in the
    bundle.
    """
    diagnostics = tuple(validate_structure(model))
    completeness = compute_mcr(model)
    whole = score_checklist(model)
    per_nfr = tuple(score_checklist(model, n.id) for n in model.nfrs)
    matrix = build_traceability_matrix(model)
    criticality = rank_criticality(matrix, mode)
    return ReportBundle(model, diagnostics, completeness, whole, per_nfr,
                        matrix, criticality)


def render_matrix_table(matrix: TraceabilityMatrix,
                        criticality: CriticalityReport,
                        legend: bool = True) -> str:
    """Fixed-width traceability table.

    Columns are G1..Gm in goal declaration order, marks are ``X``, and
    each row ends with its score and a ``*`` when the NFR is critical.
    The legend maps Gj back to goal display names.
    """
    if not matrix.nfr_ids or not matrix.goal_ids:
        raise ValueError("cannot render an empty matrix")

    goal_headers = [f"G{j + 1}" for j in range(len(matrix.goal_ids))]
    name_width = max(len("NFR"), max(len(name) for name in matrix.nfr_names))
    score_width = max(len("score"), max(len(str(s)) for s in criticality.scores))
    critical_set = set(criticality.critical)

    def row(cells: list[str]) -> str:
        return "  ".join(cells).rstrip()

    lines = [row(["NFR".ljust(name_width), *goal_headers,
                  "score".ljust(score_width), "critical"])]
    for i, name in enumerate(matrix.nfr_names):
        cells = [name.ljust(name_width)]
        for j, header in enumerate(goal_headers):
            cells.append(("X" if matrix.marks[i][j] else "").ljust(len(header)))
        cells.append(str(criticality.scores[i]).ljust(score_width))
        cells.append("*" if matrix.nfr_ids[i] in critical_set else "")
        lines.append(row(cells))

    if legend:
        lines.append("")
        for j, name in enumerate(matrix.goal_names):
            lines.append(f"G{j + 1} = {name}")
    return "\n".join(lines) + "\n"


def _diagnostic_line(diagnostic: Diagnostic) -> str:
    where = f" (line {diagnostic.source_line})" if diagnostic.source_line else ""
    return f"{diagnostic.severity} {diagnostic.rule_id}: {diagnostic.message}{where}"


def _critical_lines(bundle: ReportBundle) -> list[str]:
    report = bundle.criticality
    names = dict(zip(bundle.matrix.nfr_ids, bundle.matrix.nfr_names))
    scores = dict(zip(report.nfr_ids, report.scores))
    lines = [f"threshold ({report.threshold_mode}):"
             f" {format_ratio(report.threshold_value)}"]
    if report.critical:
        lines.extend(f"{names[nfr_id]} ({scores[nfr_id]})"
                     for nfr_id in report.critical)
    else:
        lines.append("none")
    return lines


def render_summary(bundle: ReportBundle, format: str = "text") -> str:
    """Human summary in text or markdown, same sections either way."""
    if format not in ("text", "markdown"):
        raise ValueError(f"unknown summary format: {format!r}")

    model = bundle.model
    model_lines = [
        f"system: {model.system_name}",
        f"stakeholders: {len(model.stakeholders)}",
        f"goals: {len(model.goals)}",
        f"sub-goals: {len(model.subgoals)}",
        f"NFRs: {len(model.nfrs)}",
    ]
    diagnostic_lines = [_diagnostic_line(d) for d in bundle.diagnostics] or ["none"]
    completeness_lines = [mcr_line(bundle.completeness)]
    validation_lines = [validation_line(bundle.whole_model_score)]
    validation_lines.extend(validation_line(s) for s in bundle.per_nfr_scores)
    table = render_matrix_table(bundle.matrix, bundle.criticality)

    if format == "text":
        parts = []
        for title, lines in (
            ("Model", model_lines),
            ("Diagnostics", diagnostic_lines),
            ("Completeness", completeness_lines),
            ("Validation", validation_lines),
        ):
            parts.append(title)
            parts.extend(f"  {line}" for line in lines)
            parts.append("")
        parts.append("Traceability")
        parts.append(table.rstrip("\n"))
        parts.append("")
        parts.append("Critical NFRs")
        parts.extend(f"  {line}" for line in _critical_lines(bundle))
        return "\n".join(parts) + "\n"

    parts = [f"# {model.system_name}", ""]
    for title, lines in (
        ("Model", model_lines),
        ("Diagnostics", diagnostic_lines),
        ("Completeness", completeness_lines),
        ("Validation", validation_lines),
    ):
        parts.append(f"## {title}")
        parts.append("")
        parts.extend(f"- {line}" for line in lines)
        parts.append("")
    parts.append("## Traceability")
    parts.append("")
    parts.append("```")
    parts.append(table.rstrip("\n"))
    parts.append("```")
    parts.append("")
    parts.append("## Critical NFRs")
    parts.append("")
    parts.extend(f"- {line}" for line in _critical_lines(bundle))
    return "\n".join(parts) + "\n"


def export_json(bundle: ReportBundle) -> str:
    """Machine-readable report; key order is part of the contract."""
    model = bundle.model
    layers = {}
    for label, elements in (
        ("stakeholders", model.stakeholders),
        ("goals", model.goals),
        ("subgoals", model.subgoals),
        ("nfrs", model.nfrs),
    ):
        layers[label] = {"count": len(elements),
                         "ids": [e.id for e in elements]}

    def score_obj(score: ChecklistScore) -> dict:
        return {"yes": score.yes_count, "answered": score.answered_count,
                "metric": format_ratio(score.metric)}

    report = bundle.criticality
    data = {
        "system": model.system_name,
        "layers": layers,
        "diagnostics": [
            {
                "rule": d.rule_id,
                "severity": d.severity,
                "message": d.message,
                "subject": d.subject_id,
                "line": d.source_line,
            }
            for d in bundle.diagnostics
        ],
        "mcr": {
            "n_c": bundle.completeness.n_c,
            "n_nv": bundle.completeness.n_nv,
            "value": format_ratio(bundle.completeness.mcr),
        },
        "checklist": {
            "whole_model": score_obj(bundle.whole_model_score),
            "per_nfr": {s.subject: score_obj(s) for s in bundle.per_nfr_scores},
        },
        "matrix": {
            "nfr_ids": list(bundle.matrix.nfr_ids),
            "goal_ids": list(bundle.matrix.goal_ids),
            "marks": [list(row) for row in bundle.matrix.marks],
        },
        "criticality": {
            "scores": dict(zip(report.nfr_ids, report.scores)),
            "threshold_mode": str(report.threshold_mode),
            "threshold_value": format_ratio(report.threshold_value),
            "critical": list(report.critical),
        },
    }
    return json.dumps(data, indent=2, ensure_ascii=False)
