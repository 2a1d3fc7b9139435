"""The on-disk threat-model document format: load, validate, serialize.

The interchange format is JSON (UTF-8) with a ``matra_version`` field. The
schema is strict — any unknown field anywhere is rejected at load time, so a
typo like ``skill_reqired`` cannot silently drop a rating. Loading resolves
every cross-reference and fails on the first structural problem; semantic
well-formedness checks are collected exhaustively by :func:`validate_model`.

Serialization is canonical: fixed key order, two-space indentation, sets
emitted sorted, optional fields omitted when empty. ``load -> serialize ->
load`` is the identity and repeated serialization is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

from .engine import Assessment, SurfaceProfile, VectorScore, WhatIfDiff
from .errors import (
    BadFieldError,
    DanglingReference,
    DuplicateIdError,
    MissingFieldError,
    ModelSyntaxError,
    NoImpactBasis,
    UnknownFieldError,
)
from .levels import Level
from .model import (
    Asset,
    AttackVector,
    CATEGORY_KEYS,
    CIADimension,
    Configuration,
    Control,
    ControlEffect,
    ImpactCell,
    ImpactScenario,
    ModelMetadata,
    NATURE_KEYS,
    Objective,
    SourceCategory,
    SourceNature,
    Technique,
    ThreatModel,
    ThreatSource,
    derive_scenario_impact,
)

__all__ = [
    "MATRA_VERSION",
    "Severity",
    "Finding",
    "ValidationReport",
    "load_model",
    "load_model_path",
    "validate_model",
    "serialize_model",
    "assessment_to_dict",
    "assessment_to_json",
    "whatif_to_dict",
    "whatif_to_json",
]

MATRA_VERSION = "1"

NOT_APPLICABLE = "n/a"


# ---------------------------------------------------------------------------
# strict object reading
# ---------------------------------------------------------------------------


class _Reader:
    """Reads one JSON object with strict field accounting."""

    def __init__(self, value: Any, location: str):
        if not isinstance(value, dict):
            raise BadFieldError(location, "expected an object")
        self._value = value
        self._location = location
        self._seen: set[str] = set()

    def _get(self, name: str, required: bool) -> Any:
        self._seen.add(name)
        if name not in self._value:
            if required:
                raise MissingFieldError(self._location, name)
            return None
        return self._value[name]

    def str_(self, name: str, required: bool = True, default: str = "") -> str:
        raw = self._get(name, required)
        if raw is None:
            return default
        if not isinstance(raw, str):
            raise BadFieldError(self._location, f"field {name!r} must be a string")
        return raw

    def id_(self, name: str = "id") -> str:
        value = self.str_(name)
        if not value:
            raise BadFieldError(self._location, f"field {name!r} must be a nonempty id")
        return value

    def list_(self, name: str, required: bool = True) -> list[Any]:
        raw = self._get(name, required)
        if raw is None:
            return []
        if not isinstance(raw, list):
            raise BadFieldError(self._location, f"field {name!r} must be a list")
        return raw

    def str_list(self, name: str, required: bool = True) -> list[str]:
        items = self.list_(name, required)
        for item in items:
            if not isinstance(item, str):
                raise BadFieldError(self._location, f"field {name!r} must be a list of strings")
        return items

    def level(self, name: str, required: bool = True) -> Level | None:
        raw = self._get(name, required)
        if raw is None:
            return None
        if not isinstance(raw, str):
            raise BadFieldError(self._location, f"field {name!r} must be a level string")
        try:
            return Level.parse(raw)
        except ValueError as exc:
            raise BadFieldError(self._location, f"field {name!r}: {exc}") from None

    def rating(self, name: str) -> Level | None:
        """A level or the literal "n/a" (not-applicable)."""
        raw = self._get(name, required=True)
        if raw == NOT_APPLICABLE:
            return None
        if not isinstance(raw, str):
            raise BadFieldError(self._location, f"field {name!r} must be a level or {NOT_APPLICABLE!r}")
        try:
            return Level.parse(raw)
        except ValueError as exc:
            raise BadFieldError(self._location, f"field {name!r}: {exc}") from None

    def enum(self, name: str, kind: type[Enum]) -> Enum:
        raw = self.str_(name)
        try:
            return kind(raw)
        except ValueError:
            allowed = ", ".join(member.value for member in kind)
            raise BadFieldError(
                self._location, f"field {name!r} must be one of: {allowed}"
            ) from None

    def obj(self, name: str, required: bool = True) -> Any:
        return self._get(name, required)

    def done(self) -> None:
        unknown = sorted(set(self._value) - self._seen)
        if unknown:
            raise UnknownFieldError(self._location, unknown[0])

    @property
    def location(self) -> str:
        return self._location


def _unique(seen: dict[str, str], object_id: str, location: str) -> None:
    if object_id in seen:
        raise DuplicateIdError(location, object_id)
    seen[object_id] = location


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------


def load_model(document: bytes | str) -> ThreatModel:
    """Parse and link a threat-model document; fails on the first structural error."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelSyntaxError(f"document is not valid UTF-8: {exc}") from None
    if not document.strip():
        raise ModelSyntaxError("document is empty")
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from None

    top = _Reader(raw, "$")
    version = top.str_("matra_version")
    if version != MATRA_VERSION:
        raise BadFieldError("$", f"unsupported matra_version {version!r} (expected {MATRA_VERSION!r})")

    meta = _Reader(top.obj("metadata"), "metadata")
    metadata = ModelMetadata(name=meta.str_("name"), version=meta.str_("version"))
    meta.done()

    ids: dict[str, dict[str, str]] = {
        kind: {}
        for kind in (
            "asset", "source", "scenario", "objective", "technique",
            "vector", "control", "configuration",
        )
    }

    assets: list[Asset] = []
    for i, item in enumerate(top.list_("assets")):
        r = _Reader(item, f"assets[{i}]")
        asset = Asset(id=r.id_(), name=r.str_("name"), description=r.str_("description", required=False))
        r.done()
        _unique(ids["asset"], asset.id, r.location)
        assets.append(asset)

    sources: list[ThreatSource] = []
    for i, item in enumerate(top.list_("threat_sources")):
        r = _Reader(item, f"threat_sources[{i}]")
        try:
            source = ThreatSource(
                id=r.id_(),
                name=r.str_("name"),
                category=r.enum("category", SourceCategory),  # type: ignore[arg-type]
                subtype=r.str_("subtype", required=False),
                nature=r.enum("nature", SourceNature),  # type: ignore[arg-type]
                capability=r.level("capability", required=False),
            )
        except ValueError as exc:
            raise BadFieldError(r.location, str(exc)) from None
        r.done()
        _unique(ids["source"], source.id, r.location)
        sources.append(source)

    cells: list[ImpactCell] = []
    cell_keys: dict[str, str] = {}
    for i, item in enumerate(top.list_("impact_matrix")):
        r = _Reader(item, f"impact_matrix[{i}]")
        cell = ImpactCell(
            asset=r.str_("asset"),
            dimension=r.enum("dimension", CIADimension),  # type: ignore[arg-type]
            source_key=r.str_("source_key"),
            rating=r.rating("rating"),
        )
        r.done()
        _unique(cell_keys, f"{cell.asset}/{cell.dimension.value}/{cell.source_key}", r.location)
        cells.append(cell)

    scenarios: list[ImpactScenario] = []
    for i, item in enumerate(top.list_("scenarios")):
        r = _Reader(item, f"scenarios[{i}]")
        dimensions = []
        for token in r.str_list("dimensions"):
            try:
                dimensions.append(CIADimension(token))
            except ValueError:
                raise BadFieldError(r.location, f"unknown CIA dimension {token!r}") from None
        impact = r.level("impact")
        assert impact is not None
        try:
            scenario = ImpactScenario(
                id=r.id_(),
                asset=r.str_("asset"),
                dimensions=frozenset(dimensions),
                description=r.str_("description", required=False),
                impact=impact,
                in_scope_sources=frozenset(r.str_list("in_scope_sources")),
            )
        except ValueError as exc:
            raise BadFieldError(r.location, str(exc)) from None
        r.done()
        _unique(ids["scenario"], scenario.id, r.location)
        scenarios.append(scenario)

    trees = _Reader(top.obj("trees"), "trees")

    objectives: list[Objective] = []
    for i, item in enumerate(trees.list_("objectives")):
        r = _Reader(item, f"trees.objectives[{i}]")
        objective = Objective(id=r.id_(), name=r.str_("name"), scenario=r.str_("scenario"))
        r.done()
        _unique(ids["objective"], objective.id, r.location)
        objectives.append(objective)

    techniques: list[Technique] = []
    for i, item in enumerate(trees.list_("techniques")):
        r = _Reader(item, f"trees.techniques[{i}]")
        technique = Technique(
            id=r.id_(),
            name=r.str_("name"),
            objective=r.str_("objective"),
            catalog_refs=tuple(r.str_list("catalog_refs", required=False)),
        )
        r.done()
        _unique(ids["technique"], technique.id, r.location)
        techniques.append(technique)

    vectors: list[AttackVector] = []
    for i, item in enumerate(trees.list_("vectors")):
        r = _Reader(item, f"trees.vectors[{i}]")
        baseline = r.level("baseline_residual")
        assert baseline is not None
        vector = AttackVector(
            id=r.id_(),
            name=r.str_("name"),
            technique=r.str_("technique"),
            baseline_residual=baseline,
            skill_required=r.level("skill_required", required=False),
            inherent_likelihood=r.level("inherent_likelihood", required=False),
            notes=r.str_("notes", required=False),
        )
        r.done()
        _unique(ids["vector"], vector.id, r.location)
        vectors.append(vector)
    trees.done()

    controls: list[Control] = []
    for i, item in enumerate(top.list_("controls", required=False)):
        r = _Reader(item, f"controls[{i}]")
        effects = []
        for j, raw_effect in enumerate(r.list_("effects", required=False)):
            er = _Reader(raw_effect, f"controls[{i}].effects[{j}]")
            level = er.level("residual_with_control")
            assert level is not None
            effects.append(ControlEffect(vector=er.str_("vector"), residual_with_control=level))
            er.done()
        control = Control(
            id=r.id_(),
            name=r.str_("name"),
            description=r.str_("description", required=False),
            effects=tuple(effects),
        )
        r.done()
        _unique(ids["control"], control.id, r.location)
        controls.append(control)

    configurations: list[Configuration] = []
    for i, item in enumerate(top.list_("configurations", required=False)):
        r = _Reader(item, f"configurations[{i}]")
        configuration = Configuration(
            id=r.id_(),
            name=r.str_("name"),
            enabled_controls=frozenset(r.str_list("enabled_controls")),
        )
        r.done()
        _unique(ids["configuration"], configuration.id, r.location)
        configurations.append(configuration)
    top.done()

    model = ThreatModel(
        metadata=metadata,
        assets=tuple(assets),
        threat_sources=tuple(sources),
        impact_matrix=tuple(cells),
        scenarios=tuple(scenarios),
        objectives=tuple(objectives),
        techniques=tuple(techniques),
        vectors=tuple(vectors),
        controls=tuple(controls),
        configurations=tuple(configurations),
    )
    _link(model, ids)
    return model


def load_model_path(path: Any) -> ThreatModel:
    """Load a model from a filesystem path."""
    with open(path, "rb") as handle:
        return load_model(handle.read())


def _link(model: ThreatModel, ids: Mapping[str, Mapping[str, str]]) -> None:
    """Check referential closure; raises DanglingReference on the first failure."""
    source_keys = NATURE_KEYS | CATEGORY_KEYS | set(ids["source"])
    for i, cell in enumerate(model.impact_matrix):
        if cell.asset not in ids["asset"]:
            raise DanglingReference(f"impact_matrix[{i}]", cell.asset)
        if cell.source_key not in source_keys:
            raise DanglingReference(f"impact_matrix[{i}]", cell.source_key)
    for i, scenario in enumerate(model.scenarios):
        if scenario.asset not in ids["asset"]:
            raise DanglingReference(f"scenarios[{i}]", scenario.asset)
        for source_id in sorted(scenario.in_scope_sources):
            if source_id not in ids["source"]:
                raise DanglingReference(f"scenarios[{i}].in_scope_sources", source_id)
    for i, objective in enumerate(model.objectives):
        if objective.scenario not in ids["scenario"]:
            raise DanglingReference(f"trees.objectives[{i}]", objective.scenario)
    for i, technique in enumerate(model.techniques):
        if technique.objective not in ids["objective"]:
            raise DanglingReference(f"trees.techniques[{i}]", technique.objective)
    for i, vector in enumerate(model.vectors):
        if vector.technique not in ids["technique"]:
            raise DanglingReference(f"trees.vectors[{i}]", vector.technique)
    for i, control in enumerate(model.controls):
        for j, effect in enumerate(control.effects):
            if effect.vector not in ids["vector"]:
                raise DanglingReference(f"controls[{i}].effects[{j}]", effect.vector)
    for i, configuration in enumerate(model.configurations):
        for control_id in sorted(configuration.enabled_controls):
            if control_id not in ids["control"]:
                raise DanglingReference(f"configurations[{i}].enabled_controls", control_id)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """All semantic findings for a loaded model; empty error set = evaluable."""

    findings: tuple[Finding, ...]

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "errors": len(self.errors),
            "warnings": len(self.warnings),
            "findings": [
                {
                    "severity": f.severity.value,
                    "code": f.code,
                    "location": f.location,
                    "message": f.message,
                }
                for f in self.findings
            ],
        }

    def to_json(self) -> str:
        return _dumps(self.to_dict())

    def human(self) -> str:
        lines = [
            f"{f.severity.value.upper():7s} {f.code} at {f.location}: {f.message}"
            for f in self.findings
        ]
        lines.append(
            f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)"
        )
        return "\n".join(lines)


def validate_model(model: ThreatModel) -> ValidationReport:
    """Collect every semantic finding; never raises, never stops early."""
    findings: list[Finding] = []

    def error(code: str, location: str, message: str) -> None:
        findings.append(Finding(Severity.ERROR, code, location, message))

    def warning(code: str, location: str, message: str) -> None:
        findings.append(Finding(Severity.WARNING, code, location, message))

    # Vector rating fields must match the natures of the scenario's scope.
    for vector in model.vectors:
        scenario = model.scenario_of_vector(vector)
        natures = {model.sources_by_id[s].nature for s in scenario.in_scope_sources}
        location = f"trees.vectors[{vector.id}]"
        if SourceNature.ADVERSARIAL in natures and vector.skill_required is None:
            error(
                "missing-skill", location,
                f"scenario {scenario.id} has adversarial sources in scope but the "
                "vector declares no skill_required",
            )
        if SourceNature.NON_ADVERSARIAL in natures and vector.inherent_likelihood is None:
            error(
                "missing-inherent", location,
                f"scenario {scenario.id} has non-adversarial sources in scope but the "
                "vector declares no inherent_likelihood",
            )

    # Controls may only lower residuals.
    for control in model.controls:
        for effect in control.effects:
            vector = model.vectors_by_id[effect.vector]
            if effect.residual_with_control > vector.baseline_residual:
                error(
                    "control-raises-residual",
                    f"controls[{control.id}].effects[{effect.vector}]",
                    f"effect sets residual {effect.residual_with_control.value} above the "
                    f"vector baseline {vector.baseline_residual.value}",
                )

    # Declared scenario impacts must match the matrix derivation.
    for scenario in model.scenarios:
        location = f"scenarios[{scenario.id}]"
        try:
            derived = derive_scenario_impact(scenario, model.impact_matrix, model.sources_by_id)
        except NoImpactBasis:
            error(
                "no-impact-basis", location,
                "no applicable impact cell exists for the scenario's in-scope sources",
            )
            continue
        if derived is not scenario.impact:
            error(
                "impact-mismatch", location,
                f"declared impact {scenario.impact.value} but the impact matrix "
                f"derives {derived.value}",
            )

    # Tree shape: no hollow nodes.
    for objective in model.objectives:
        if not model.techniques_by_objective.get(objective.id):
            error(
                "empty-objective", f"trees.objectives[{objective.id}]",
                "objective has no techniques",
            )
    for technique in model.techniques:
        if not model.vectors_by_technique.get(technique.id):
            error(
                "empty-technique", f"trees.techniques[{technique.id}]",
                "technique has no vectors",
            )

    # Advisory findings.
    for vector in model.vectors:
        if vector.id not in model.effects_by_vector:
            warning(
                "uncontrolled-vector", f"trees.vectors[{vector.id}]",
                "no control affects this vector; its residual is fixed at baseline",
            )
    scoped = set().union(*(s.in_scope_sources for s in model.scenarios)) if model.scenarios else set()
    for source in model.threat_sources:
        if source.id not in scoped:
            warning(
                "unused-source", f"threat_sources[{source.id}]",
                "threat source is not in scope for any scenario",
            )

    return ValidationReport(findings=tuple(findings))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _dumps(value: Any) -> str:
    return json.dumps(value, indent=2, ensure_ascii=False)


_DIMENSION_ORDER = {dim: i for i, dim in enumerate(CIADimension)}


def _sorted_dimensions(dimensions: frozenset[CIADimension]) -> list[str]:
    return [d.value for d in sorted(dimensions, key=_DIMENSION_ORDER.__getitem__)]


def model_to_dict(model: ThreatModel) -> dict[str, Any]:
    """Canonical dict form of a model (fixed key order, sorted sets)."""
    out: dict[str, Any] = {
        "matra_version": MATRA_VERSION,
        "metadata": {"name": model.metadata.name, "version": model.metadata.version},
        "assets": [
            _drop_empty({"id": a.id, "name": a.name, "description": a.description})
            for a in model.assets
        ],
        "threat_sources": [
            _drop_empty(
                {
                    "id": s.id,
                    "name": s.name,
                    "category": s.category.value,
                    "subtype": s.subtype,
                    "nature": s.nature.value,
                    "capability": s.capability.value if s.capability else None,
                }
            )
            for s in model.threat_sources
        ],
        "impact_matrix": [
            {
                "asset": c.asset,
                "dimension": c.dimension.value,
                "source_key": c.source_key,
                "rating": c.rating.value if c.rating else NOT_APPLICABLE,
            }
            for c in model.impact_matrix
        ],
        "scenarios": [
            _drop_empty(
                {
                    "id": s.id,
                    "asset": s.asset,
                    "dimensions": _sorted_dimensions(s.dimensions),
                    "description": s.description,
                    "impact": s.impact.value,
                    "in_scope_sources": sorted(s.in_scope_sources),
                }
            )
            for s in model.scenarios
        ],
        "trees": {
            "objectives": [
                {"id": o.id, "name": o.name, "scenario": o.scenario} for o in model.objectives
            ],
            "techniques": [
                _drop_empty(
                    {
                        "id": t.id,
                        "name": t.name,
                        "objective": t.objective,
                        "catalog_refs": list(t.catalog_refs),
                    }
                )
                for t in model.techniques
            ],
            "vectors": [
                _drop_empty(
                    {
                        "id": v.id,
                        "name": v.name,
                        "technique": v.technique,
                        "skill_required": v.skill_required.value if v.skill_required else None,
                        "inherent_likelihood": (
                            v.inherent_likelihood.value if v.inherent_likelihood else None
                        ),
                        "baseline_residual": v.baseline_residual.value,
                        "notes": v.notes,
                    }
                )
                for v in model.vectors
            ],
        },
        "controls": [
            _drop_empty(
                {
                    "id": c.id,
                    "name": c.name,
                    "description": c.description,
                    "effects": [
                        {"vector": e.vector, "residual_with_control": e.residual_with_control.value}
                        for e in c.effects
                    ],
                }
            )
            for c in model.controls
        ],
        "configurations": [
            {"id": c.id, "name": c.name, "enabled_controls": sorted(c.enabled_controls)}
            for c in model.configurations
        ],
    }
    return out


def _drop_empty(mapping: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in mapping.items() if v not in (None, "", [])}


def serialize_model(model: ThreatModel) -> str:
    """Canonical, byte-stable serialization; load(serialize(m)) == m."""
    return _dumps(model_to_dict(model)) + "\n"


def _surface_to_dict(surface: SurfaceProfile) -> dict[str, Any]:
    return {
        "path_count": surface.path_count,
        "histogram": {lvl.value: surface.histogram.get(lvl, 0) for lvl in Level},
    }


def _score_to_dict(score: VectorScore) -> dict[str, Any]:
    return {
        "vector": score.vector,
        "adversarial": score.adversarial,
        "fit_or_inherent": score.fit_or_inherent.value,
        "residual": score.residual.value,
        "combined": score.combined.value,
    }


def assessment_to_dict(assessment: Assessment) -> dict[str, Any]:
    """Canonical dict form of an assessment (the CLI and HTTP wire format)."""
    return {
        "scenario": assessment.scenario,
        "source": assessment.source,
        "configuration": assessment.configuration,
        "enabled_controls": list(assessment.enabled_controls),
        "impact": assessment.impact.value,
        "scenario_likelihood": assessment.scenario_likelihood.value,
        "risk": {"label": assessment.risk.label.value, "score": assessment.risk.score},
        "objectives": [
            {"objective": oid, "likelihood": lvl.value}
            for oid, lvl in assessment.objective_likelihoods
        ],
        "vectors": [_score_to_dict(s) for s in assessment.vector_scores],
        "surface": _surface_to_dict(assessment.surface),
    }


def assessment_to_json(assessment: Assessment) -> str:
    return _dumps(assessment_to_dict(assessment))


def assessments_to_json(assessments: Sequence[Assessment]) -> str:
    return _dumps([assessment_to_dict(a) for a in assessments])


def whatif_to_dict(diff: WhatIfDiff) -> dict[str, Any]:
    def side(assessment: Assessment) -> dict[str, Any]:
        return {
            "configuration": assessment.configuration,
            "enabled_controls": list(assessment.enabled_controls),
            "scenario_likelihood": assessment.scenario_likelihood.value,
            "risk": {"label": assessment.risk.label.value, "score": assessment.risk.score},
        }

    return {
        "scenario": diff.scenario,
        "source": diff.source,
        "base": side(diff.base),
        "alt": side(diff.alt),
        "risk_delta": diff.risk_delta,
        "objectives": [
            {
                "objective": change.objective,
                "base": change.likelihood[0].value,
                "alt": change.likelihood[1].value,
                "changed": change.changed,
            }
            for change in diff.objectives
        ],
        "vectors": [
            {
                "vector": change.vector,
                "residual_base": change.residual[0].value,
                "residual_alt": change.residual[1].value,
                "combined_base": change.combined[0].value,
                "combined_alt": change.combined[1].value,
                "changed": change.changed,
            }
            for change in diff.vectors
        ],
    }


def whatif_to_json(diff: WhatIfDiff) -> str:
    return _dumps(whatif_to_dict(diff))
