"""Structural domain types: sources, assets, impact matrix, trees, controls.

Everything here is immutable after construction and safe to share between
concurrent evaluators. Construction-time checks cover only *local* invariants
(single-object consistency); cross-object referential integrity is the
loader's job and semantic well-formedness is the validator's.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Mapping

from .errors import NoImpactBasis
from .levels import Level, level_max

__all__ = [
    "SourceCategory",
    "SourceNature",
    "CIADimension",
    "ThreatSource",
    "Asset",
    "ImpactCell",
    "ImpactScenario",
    "Objective",
    "Technique",
    "AttackVector",
    "ControlEffect",
    "Control",
    "Configuration",
    "ModelMetadata",
    "ThreatModel",
    "derive_scenario_impact",
]


class SourceCategory(Enum):
    """NIST-derived threat source taxonomy."""

    INDIVIDUAL = "individual"
    GROUP = "group"
    ORGANISATION = "organisation"
    NATION_STATE = "nation_state"
    ACCIDENTAL = "accidental"


class SourceNature(Enum):
    ADVERSARIAL = "adversarial"
    NON_ADVERSARIAL = "non_adversarial"


class CIADimension(Enum):
    CONFIDENTIALITY = "confidentiality"
    INTEGRITY = "integrity"
    AVAILABILITY = "availability"

    @property
    def letter(self) -> str:
        return self.value[0].upper()


# Keys an impact cell may use besides a concrete source id.
NATURE_KEYS = {n.value for n in SourceNature}
CATEGORY_KEYS = {c.value for c in SourceCategory}


@dataclass(frozen=True)
class ThreatSource:
    """An entity or condition capable of exploiting vulnerabilities.

    Adversarial sources carry a capability grade; non-adversarial ones do not
    (their vectors carry inherent manifestation likelihoods instead).
    """

    id: str
    name: str
    category: SourceCategory
    subtype: str
    nature: SourceNature
    capability: Level | None = None

    def __post_init__(self) -> None:
        adversarial = self.nature is SourceNature.ADVERSARIAL
        if adversarial and self.capability is None:
            raise ValueError(f"adversarial source {self.id!r} needs a capability")
        if not adversarial and self.capability is not None:
            raise ValueError(f"non-adversarial source {self.id!r} cannot have a capability")
        if (self.category is SourceCategory.ACCIDENTAL) == adversarial:
            raise ValueError(
                f"source {self.id!r}: category 'accidental' and nature must agree"
            )


@dataclass(frozen=True)
class Asset:
    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class ImpactCell:
    """One cell of the business impact matrix.

    ``source_key`` is a nature key ("adversarial"/"non_adversarial"), a
    category key ("organisation", "accidental", ...), or a concrete source id.
    ``rating`` of None encodes a not-applicable cell, which is distinct from
    Low: it means no impact pathway exists at all.
    """

    asset: str
    dimension: CIADimension
    source_key: str
    rating: Level | None


@dataclass(frozen=True)
class ImpactScenario:
    """A distinct adverse outcome, rated at the highest assessed impact."""

    id: str
    asset: str
    dimensions: frozenset[CIADimension]
    description: str
    impact: Level
    in_scope_sources: frozenset[str]

    def __post_init__(self) -> None:
        if not self.dimensions:
            raise ValueError(f"scenario {self.id!r} needs at least one CIA dimension")
        if not self.in_scope_sources:
            raise ValueError(f"scenario {self.id!r} needs at least one in-scope source")


@dataclass(frozen=True)
class Objective:
    """A goal that must be achieved for the impact to occur (AND semantics)."""

    id: str
    name: str
    scenario: str


@dataclass(frozen=True)
class Technique:
    """A method class grouping concrete vectors; carries no score of its own."""

    id: str
    name: str
    objective: str
    catalog_refs: tuple[str, ...] = ()


@dataclass(frozen=True)
class AttackVector:
    """A concrete, scored instance of a technique in the architecture."""

    id: str
    name: str
    technique: str
    baseline_residual: Level
    skill_required: Level | None = None
    inherent_likelihood: Level | None = None
    notes: str = ""


@dataclass(frozen=True)
class ControlEffect:
    vector: str
    residual_with_control: Level


@dataclass(frozen=True)
class Control:
    """A security control that lowers residual likelihoods on specific vectors."""

    id: str
    name: str
    description: str = ""
    effects: tuple[ControlEffect, ...] = ()


@dataclass(frozen=True)
class Configuration:
    """A named set of enabled controls; the empty set is a valid default."""

    id: str
    name: str
    enabled_controls: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ModelMetadata:
    name: str
    version: str


@dataclass(frozen=True)
class ThreatModel:
    """The complete, fully linked threat-model document.

    Tuples preserve document order, which is also the deterministic rendering
    and aggregation-argument order everywhere downstream.
    """

    metadata: ModelMetadata
    assets: tuple[Asset, ...]
    threat_sources: tuple[ThreatSource, ...]
    impact_matrix: tuple[ImpactCell, ...]
    scenarios: tuple[ImpactScenario, ...]
    objectives: tuple[Objective, ...]
    techniques: tuple[Technique, ...]
    vectors: tuple[AttackVector, ...]
    controls: tuple[Control, ...] = ()
    configurations: tuple[Configuration, ...] = ()

    # -- id lookups ---------------------------------------------------------

    @cached_property
    def assets_by_id(self) -> Mapping[str, Asset]:
        return {a.id: a for a in self.assets}

    @cached_property
    def sources_by_id(self) -> Mapping[str, ThreatSource]:
        return {s.id: s for s in self.threat_sources}

    @cached_property
    def scenarios_by_id(self) -> Mapping[str, ImpactScenario]:
        return {s.id: s for s in self.scenarios}

    @cached_property
    def objectives_by_id(self) -> Mapping[str, Objective]:
        return {o.id: o for o in self.objectives}

    @cached_property
    def techniques_by_id(self) -> Mapping[str, Technique]:
        return {t.id: t for t in self.techniques}

    @cached_property
    def vectors_by_id(self) -> Mapping[str, AttackVector]:
        return {v.id: v for v in self.vectors}

    @cached_property
    def controls_by_id(self) -> Mapping[str, Control]:
        return {c.id: c for c in self.controls}

    @cached_property
    def configurations_by_id(self) -> Mapping[str, Configuration]:
        return {c.id: c for c in self.configurations}

    # -- tree navigation (document order) ------------------------------------

    @cached_property
    def objectives_by_scenario(self) -> Mapping[str, tuple[Objective, ...]]:
        out: dict[str, list[Objective]] = {}
        for o in self.objectives:
            out.setdefault(o.scenario, []).append(o)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def techniques_by_objective(self) -> Mapping[str, tuple[Technique, ...]]:
        out: dict[str, list[Technique]] = {}
        for t in self.techniques:
            out.setdefault(t.objective, []).append(t)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def vectors_by_technique(self) -> Mapping[str, tuple[AttackVector, ...]]:
        out: dict[str, list[AttackVector]] = {}
        for v in self.vectors:
            out.setdefault(v.technique, []).append(v)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def effects_by_vector(self) -> Mapping[str, tuple[tuple[str, Level], ...]]:
        """For each vector id, the (control id, residual) pairs targeting it."""
        out: dict[str, list[tuple[str, Level]]] = {}
        for control in self.controls:
            for effect in control.effects:
                out.setdefault(effect.vector, []).append(
                    (control.id, effect.residual_with_control)
                )
        return {k: tuple(v) for k, v in out.items()}

    def has_tree(self, scenario_id: str) -> bool:
        return bool(self.objectives_by_scenario.get(scenario_id))

    def objective_vectors(self, objective_id: str) -> tuple[AttackVector, ...]:
        """All vectors under an objective, across its techniques, in document order."""
        vectors: list[AttackVector] = []
        for technique in self.techniques_by_objective.get(objective_id, ()):
            vectors.extend(self.vectors_by_technique.get(technique.id, ()))
        return tuple(vectors)

    def scenario_of_vector(self, vector: AttackVector) -> ImpactScenario:
        technique = self.techniques_by_id[vector.technique]
        objective = self.objectives_by_id[technique.objective]
        return self.scenarios_by_id[objective.scenario]

    def scoped_sources(self, scenario: ImpactScenario) -> tuple[ThreatSource, ...]:
        """In-scope sources in declaration order."""
        return tuple(s for s in self.threat_sources if s.id in scenario.in_scope_sources)


def _cell_specificity(cell: ImpactCell, source: ThreatSource) -> int:
    """How specifically a cell addresses a source: id > category > nature; -1 if not at all."""
    if cell.source_key == source.id:
        return 2
    if cell.source_key == source.category.value:
        return 1
    if cell.source_key == source.nature.value:
        return 0
    return -1


def derive_scenario_impact(
    scenario: ImpactScenario,
    matrix: tuple[ImpactCell, ...] | list[ImpactCell],
    sources_by_id: Mapping[str, ThreatSource],
) -> Level:
    """Impact a scenario earns from the matrix: the highest applicable rating.

    For each in-scope source and each of the scenario's dimensions, the most
    specific matching cell applies (a cell keyed by the source id shadows one
    keyed by its category, which shadows one keyed by its nature). N/a cells
    participate in shadowing but contribute no rating. If nothing applicable
    remains, the scenario has no impact basis for these sources.
    """
    ratings: list[Level] = []
    for source_id in scenario.in_scope_sources:
        source = sources_by_id[source_id]
        for dimension in scenario.dimensions:
            best: ImpactCell | None = None
            best_rank = -1
            for cell in matrix:
                if cell.asset != scenario.asset or cell.dimension is not dimension:
                    continue
                rank = _cell_specificity(cell, source)
                if rank > best_rank:
                    best, best_rank = cell, rank
            if best is not None and best.rating is not None:
                ratings.append(best.rating)
    if not ratings:
        raise NoImpactBasis(
            f"scenario {scenario.id!r}: no applicable impact cell for its in-scope sources"
        )
    return level_max(ratings)
