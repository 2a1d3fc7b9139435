"""Rendering: annotated text trees, DOT graphs, and risk tables.

All renderers are pure functions of (model, assessments) with deterministic
output: node order is document order, annotation order is the order the
assessments were given in.
"""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .engine import Assessment, assess
from .errors import MixedScenario, OutOfScope
from .levels import RiskLabel
from .model import ThreatModel

__all__ = [
    "RISK_COLORS",
    "ReportFormat",
    "ReportRequest",
    "render_tree",
    "export_dot",
    "render_risk_table",
    "build_report",
]

# Fixed DOT fill colors for the risk-rated root node.
RISK_COLORS = {
    RiskLabel.VERY_HIGH: "red",
    RiskLabel.HIGH: "orange",
    RiskLabel.MODERATE: "gold",
    RiskLabel.LOW: "palegreen",
    RiskLabel.VERY_LOW: "lightblue",
}

_INDENT = "  "


def config_label(model: ThreatModel, assessment: Assessment) -> str:
    """Human label for the control set an assessment was computed under."""
    if assessment.configuration is not None:
        return model.configurations_by_id[assessment.configuration].name
    if assessment.enabled_controls:
        return "controls: " + ", ".join(assessment.enabled_controls)
    return "no controls"


def render_tree(model: ThreatModel, assessments: Sequence[Assessment]) -> str:
    """Indented attack tree with per-configuration annotations on scored nodes.

    Takes one or two assessments of the same (scenario, source); each scored
    node gets one annotation line per assessment, in the order given. Vector
    annotations carry the full fit/inherent -> residual -> combined chain.
    """
    if not 1 <= len(assessments) <= 2:
        raise ValueError("tree rendering takes one or two assessments")
    first = assessments[0]
    for other in assessments[1:]:
        if other.scenario != first.scenario or other.source != first.source:
            raise MixedScenario(
                "all assessments in one tree must share a scenario and threat source"
            )
    scenario = model.scenarios_by_id[first.scenario]
    labels = [config_label(model, a) for a in assessments]

    lines: list[str] = [f"{scenario.id}: {scenario.description}"]
    for label, a in zip(labels, assessments):
        parts = ", ".join(lvl.short for _, lvl in a.objective_likelihoods)
        lines.append(f"{_INDENT}{label}: {a.scenario_likelihood.short} = min({parts})")

    for objective in model.objectives_by_scenario[scenario.id]:
        lines.append(f"{_INDENT}Obj: {objective.name}")
        vector_ids = [v.id for v in model.objective_vectors(objective.id)]
        for label, a in zip(labels, assessments):
            parts = ", ".join(a.score_of(vid).combined.short for vid in vector_ids)
            level = a.objective_likelihood_of(objective.id)
            lines.append(f"{_INDENT * 2}{label}: {level.short} = max({parts})")
        for technique in model.techniques_by_objective[objective.id]:
            lines.append(f"{_INDENT * 2}Tech: {technique.name}")
            for vector in model.vectors_by_technique.get(technique.id, ()):
                lines.append(f"{_INDENT * 3}Vec: {vector.name}")
                for label, a in zip(labels, assessments):
                    score = a.score_of(vector.id)
                    basis = "capfit" if score.adversarial else "inherent"
                    lines.append(
                        f"{_INDENT * 4}{label}: {score.combined.short} "
                        f"({basis}: {score.fit_or_inherent.short} → "
                        f"res: {score.residual.short} → {score.combined.short})"
                    )
    lines.append("Risk:")
    for label, a in zip(labels, assessments):
        lines.append(f"{_INDENT}{label}: {a.risk.display}")
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(model: ThreatModel, assessment: Assessment) -> str:
    """Graphviz digraph of one assessed tree; the root is risk-colored."""
    scenario = model.scenarios_by_id[assessment.scenario]
    lines = [
        f'digraph "{_dot_escape(scenario.id)}" {{',
        f"{_INDENT}rankdir=LR;",
        f"{_INDENT}node [shape=box, style=filled, fillcolor=white];",
    ]
    root_label = (
        _dot_escape(f"{scenario.id}: {scenario.description}")
        + "\\n"
        + _dot_escape(
            f"likelihood: {assessment.scenario_likelihood.short}, risk: {assessment.risk.display}"
        )
    )
    lines.append(
        f'{_INDENT}"{_dot_escape(scenario.id)}" [label="{root_label}", '
        f'fillcolor="{RISK_COLORS[assessment.risk.label]}"];'
    )
    edges: list[str] = []
    for objective in model.objectives_by_scenario[scenario.id]:
        level = assessment.objective_likelihood_of(objective.id)
        lines.append(
            f'{_INDENT}"{_dot_escape(objective.id)}" '
            f'[label="Obj: {_dot_escape(objective.name)}\\n{level.short}"];'
        )
        edges.append(f'{_INDENT}"{_dot_escape(scenario.id)}" -> "{_dot_escape(objective.id)}";')
        for technique in model.techniques_by_objective[objective.id]:
            lines.append(
                f'{_INDENT}"{_dot_escape(technique.id)}" '
                f'[label="Tech: {_dot_escape(technique.name)}"];'
            )
            edges.append(
                f'{_INDENT}"{_dot_escape(objective.id)}" -> "{_dot_escape(technique.id)}";'
            )
            for vector in model.vectors_by_technique.get(technique.id, ()):
                score = assessment.score_of(vector.id)
                lines.append(
                    f'{_INDENT}"{_dot_escape(vector.id)}" '
                    f'[label="Vec: {_dot_escape(vector.name)}\\n{score.combined.short}"];'
                )
                edges.append(
                    f'{_INDENT}"{_dot_escape(technique.id)}" -> "{_dot_escape(vector.id)}";'
                )
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


_TABLE_COLUMNS = ["Scenario", "Threat Source", "Configuration", "Likelihood", "Impact", "Risk"]


def _table_rows(model: ThreatModel, assessments: Sequence[Assessment]) -> list[list[str]]:
    rows = []
    for a in assessments:
        source = model.sources_by_id[a.source]
        rows.append(
            [
                a.scenario,
                source.name,
                config_label(model, a),
                a.scenario_likelihood.display,
                a.impact.display,
                a.risk.display,
            ]
        )
    return rows


def render_risk_table(
    model: ThreatModel,
    assessments: Sequence[Assessment],
    fmt: str = "markdown",
) -> str:
    """One row per assessment, in input order; markdown or RFC 4180 CSV."""
    rows = _table_rows(model, assessments)
    if fmt == "csv":
        buffer = _io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(_TABLE_COLUMNS)
        writer.writerows(rows)
        return buffer.getvalue()
    if fmt == "markdown":
        lines = [
            "| " + " | ".join(_TABLE_COLUMNS) + " |",
            "| " + " | ".join("---" for _ in _TABLE_COLUMNS) + " |",
        ]
        lines.extend("| " + " | ".join(row) + " |" for row in rows)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r} (expected markdown or csv)")


class ReportFormat(Enum):
    TEXT_TREE = "text-tree"
    DOT = "dot"
    MARKDOWN_TABLE = "markdown-table"
    CSV = "csv"


@dataclass(frozen=True)
class ReportRequest:
    """What to render: which scenarios, for which source, under which configurations.

    ``scenarios`` of None means every scenario that has a tree; ``source`` of
    None means every in-scope source of each selected scenario.
    """

    format: ReportFormat
    configurations: tuple[str, ...]
    scenarios: tuple[str, ...] | None = None
    source: str | None = None

    def __post_init__(self) -> None:
        if not self.configurations:
            raise ValueError("a report needs at least one configuration")


def _selected_pairs(model: ThreatModel, request: ReportRequest) -> list[tuple[str, str]]:
    if request.scenarios is None:
        scenario_ids = [s.id for s in model.scenarios if model.has_tree(s.id)]
    else:
        scenario_ids = []
        for scenario_id in request.scenarios:
            if scenario_id not in model.scenarios_by_id:
                raise KeyError(f"unknown scenario {scenario_id!r}")
            scenario_ids.append(scenario_id)
    pairs: list[tuple[str, str]] = []
    for scenario_id in scenario_ids:
        scenario = model.scenarios_by_id[scenario_id]
        if request.source is not None:
            if request.source not in model.sources_by_id:
                raise KeyError(f"unknown threat source {request.source!r}")
            if request.source not in scenario.in_scope_sources:
                raise OutOfScope(
                    f"threat source {request.source!r} is not in scope for {scenario_id!r}"
                )
            pairs.append((scenario_id, request.source))
        else:
            pairs.extend((scenario_id, s.id) for s in model.scoped_sources(scenario))
    return pairs


def build_report(model: ThreatModel, request: ReportRequest) -> str:
    """Assess the requested selection and render it in the requested format."""
    for config_id in request.configurations:
        if config_id not in model.configurations_by_id:
            raise KeyError(f"unknown configuration {config_id!r}")
    pairs = _selected_pairs(model, request)

    if request.format is ReportFormat.TEXT_TREE:
        if len(request.configurations) > 2:
            raise ValueError("tree rendering supports at most two configurations per report")
        sections = []
        for scenario_id, source_id in pairs:
            assessments = [
                assess(model, scenario_id, source_id, configuration=c)
                for c in request.configurations
            ]
            sections.append(render_tree(model, assessments))
        return "\n".join(sections)

    if request.format is ReportFormat.DOT:
        graphs = []
        for scenario_id, source_id in pairs:
            for config_id in request.configurations:
                graphs.append(
                    export_dot(model, assess(model, scenario_id, source_id, configuration=config_id))
                )
        return "\n".join(graphs)

    assessments = [
        assess(model, scenario_id, source_id, configuration=config_id)
        for scenario_id, source_id in pairs
        for config_id in request.configurations
    ]
    fmt = "csv" if request.format is ReportFormat.CSV else "markdown"
    return render_risk_table(model, assessments, fmt)
