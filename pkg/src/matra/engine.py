"""Likelihood and risk quantification over attack trees.

The pipeline, per (scenario, threat source, control set):

1. every leaf vector gets a combined likelihood — capability fit x residual
   for adversarial sources, inherent x residual for non-adversarial ones;
2. each objective takes the maximum over its vectors (path of least
   resistance);
3. the scenario takes the minimum over its objectives (every objective must
   succeed);
4. scenario likelihood x scenario impact indexes the risk matrix.

Alongside the weakest-link result, the full attack surface enumerates every
complete path (one vector per objective) and histograms the path likelihoods.

All functions are pure; assessments for different inputs may run concurrently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptyObjective,
    EmptyScenario,
    MissingInherent,
    MissingSkill,
    NoTree,
    OutOfScope,
    PathExplosion,
)
from .levels import Level, RiskLabel, RiskRating, level_max, level_min
from .model import AttackVector, Configuration, SourceNature, ThreatModel, ThreatSource

__all__ = [
    "DEFAULT_PATH_CAP",
    "VectorScore",
    "SurfaceProfile",
    "Assessment",
    "VectorChange",
    "ObjectiveChange",
    "WhatIfDiff",
    "capability_fit",
    "combine_adversarial",
    "combine_nonadversarial",
    "risk_rating",
    "effective_residual",
    "score_vector",
    "objective_likelihood",
    "scenario_likelihood",
    "attack_surface",
    "assess",
    "whatif_diff",
]

DEFAULT_PATH_CAP = 10**6

L, M, H = Level.LOW, Level.MODERATE, Level.HIGH

# Capability fit: adversary capability (row) vs vector skill requirement (column).
CAPABILITY_FIT_TABLE: Mapping[tuple[Level, Level], Level] = {
    (H, L): H, (H, M): H, (H, H): H,
    (M, L): H, (M, M): H, (M, H): M,
    (L, L): H, (L, M): M, (L, H): L,
}

# Combination matrix: capability fit (row) vs residual success likelihood (column).
ADVERSARIAL_COMBINATION_TABLE: Mapping[tuple[Level, Level], Level] = {
    (L, L): L, (L, M): L, (L, H): M,
    (M, L): L, (M, M): M, (M, H): H,
    (H, L): M, (H, M): H, (H, H): H,
}

# Risk matrix: likelihood (row) vs impact (column).
RISK_MATRIX: Mapping[tuple[Level, Level], RiskRating] = {
    (H, L): RiskRating(RiskLabel.MODERATE, 3),
    (H, M): RiskRating(RiskLabel.HIGH, 6),
    (H, H): RiskRating(RiskLabel.VERY_HIGH, 9),
    (M, L): RiskRating(RiskLabel.LOW, 2),
    (M, M): RiskRating(RiskLabel.MODERATE, 4),
    (M, H): RiskRating(RiskLabel.HIGH, 6),
    (L, L): RiskRating(RiskLabel.VERY_LOW, 1),
    (L, M): RiskRating(RiskLabel.LOW, 2),
    (L, H): RiskRating(RiskLabel.MODERATE, 3),
}


def capability_fit(capability: Level, skill_required: Level) -> Level:
    """How well an adversary's capability matches a vector's skill requirement."""
    return CAPABILITY_FIT_TABLE[(capability, skill_required)]


def combine_adversarial(fit: Level, residual: Level) -> Level:
    """Combination-matrix cell for capability fit x residual success likelihood."""
    return ADVERSARIAL_COMBINATION_TABLE[(fit, residual)]


def combine_nonadversarial(inherent: Level, residual: Level) -> Level:
    """The inherent manifestation likelihood bounds the result: min(inherent, residual)."""
    return level_min([inherent, residual])


def risk_rating(likelihood: Level, impact: Level) -> RiskRating:
    """Risk-matrix cell for (likelihood, impact)."""
    return RISK_MATRIX[(likelihood, impact)]


@dataclass(frozen=True)
class VectorScore:
    """Per-vector scoring chain under one source and control set."""

    vector: str
    fit_or_inherent: Level
    residual: Level
    combined: Level
    adversarial: bool


@dataclass(frozen=True)
class SurfaceProfile:
    """Histogram of complete-path likelihoods across the whole tree."""

    path_count: int
    histogram: Mapping[Level, int]

    def nonzero(self) -> dict[Level, int]:
        return {lvl: n for lvl, n in self.histogram.items() if n}


@dataclass(frozen=True)
class Assessment:
    """The full evaluated result for one (scenario, source, control set)."""

    scenario: str
    source: str
    configuration: str | None
    enabled_controls: tuple[str, ...]
    vector_scores: tuple[VectorScore, ...]
    objective_likelihoods: tuple[tuple[str, Level], ...]
    scenario_likelihood: Level
    impact: Level
    risk: RiskRating
    surface: SurfaceProfile

    def score_of(self, vector_id: str) -> VectorScore:
        for score in self.vector_scores:
            if score.vector == vector_id:
                return score
        raise KeyError(vector_id)

    def objective_likelihood_of(self, objective_id: str) -> Level:
        for oid, lvl in self.objective_likelihoods:
            if oid == objective_id:
                return lvl
        raise KeyError(objective_id)


def resolve_controls(
    model: ThreatModel,
    configuration: str | None = None,
    controls: Iterable[str] | None = None,
) -> tuple[str | None, frozenset[str]]:
    """Resolve a named configuration or an ad-hoc control set to control ids.

    Exactly one of ``configuration``/``controls`` may be given; neither means
    the empty (default) control set.
    """
    if configuration is not None and controls is not None:
        raise ValueError("give either a configuration id or an ad-hoc control set, not both")
    if configuration is not None:
        config = model.configurations_by_id.get(configuration)
        if config is None:
            raise KeyError(f"unknown configuration {configuration!r}")
        return configuration, config.enabled_controls
    if controls is not None:
        control_set = frozenset(controls)
        for control_id in control_set:
            if control_id not in model.controls_by_id:
                raise KeyError(f"unknown control {control_id!r}")
        return None, control_set
    return None, frozenset()


def effective_residual(
    vector: AttackVector,
    enabled_controls: frozenset[str],
    model: ThreatModel,
) -> Level:
    """Residual after the enabled controls: minimum of baseline and all effects.

    Stacked controls compose by minimum — on an ordinal scale the strongest
    enabled control dominates. Vectors untargeted by any enabled control keep
    their baseline.
    """
    residual = vector.baseline_residual
    for control_id, with_control in model.effects_by_vector.get(vector.id, ()):
        if control_id in enabled_controls:
            residual = level_min([residual, with_control])
    return residual


def score_vector(
    vector: AttackVector,
    source: ThreatSource,
    enabled_controls: frozenset[str],
    model: ThreatModel,
) -> VectorScore:
    """Combined likelihood of one vector for one source under the enabled controls.

    The effective residual caps the combined likelihood in both branches: a
    vector whose controls block it cannot succeed regardless of how well the
    attacker's capability fits.
    """
    residual = effective_residual(vector, enabled_controls, model)
    if source.nature is SourceNature.ADVERSARIAL:
        if vector.skill_required is None:
            raise MissingSkill(
                f"vector {vector.id!r} has no skill requirement but was assessed "
                f"for adversarial source {source.id!r}"
            )
        assert source.capability is not None
        fit = capability_fit(source.capability, vector.skill_required)
        combined = level_min([combine_adversarial(fit, residual), residual])
        return VectorScore(vector.id, fit, residual, combined, adversarial=True)
    if vector.inherent_likelihood is None:
        raise MissingInherent(
            f"vector {vector.id!r} has no inherent likelihood but was assessed "
            f"for non-adversarial source {source.id!r}"
        )
    combined = combine_nonadversarial(vector.inherent_likelihood, residual)
    return VectorScore(
        vector.id, vector.inherent_likelihood, residual, combined, adversarial=False
    )


def objective_likelihood(scores: Sequence[VectorScore]) -> Level:
    """Maximum combined likelihood across an objective's vectors."""
    if not scores:
        raise EmptyObjective("objective has no scored vectors")
    return level_max([s.combined for s in scores])


def scenario_likelihood(objective_likelihoods: Sequence[Level]) -> Level:
    """Minimum across objective likelihoods: every objective must succeed."""
    if not objective_likelihoods:
        raise EmptyScenario("scenario has no scored objectives")
    return level_min(objective_likelihoods)


def attack_surface(
    per_objective_scores: Sequence[Sequence[VectorScore]],
    path_cap: int = DEFAULT_PATH_CAP,
) -> SurfaceProfile:
    """Exhaustive path histogram: one vector per objective, min over the path.

    Refuses (rather than truncates) when the Cartesian product exceeds the cap.
    """
    if not per_objective_scores:
        raise EmptyScenario("no objectives to enumerate paths over")
    path_count = 1
    for scores in per_objective_scores:
        if not scores:
            raise EmptyObjective("objective has no scored vectors")
        path_count *= len(scores)
    if path_count > path_cap:
        raise PathExplosion(path_count, path_cap)
    histogram = {lvl: 0 for lvl in Level}
    for path in itertools.product(*per_objective_scores):
        histogram[level_min([s.combined for s in path])] += 1
    return SurfaceProfile(path_count=path_count, histogram=histogram)


def assess(
    model: ThreatModel,
    scenario_id: str,
    source_id: str,
    configuration: str | None = None,
    controls: Iterable[str] | None = None,
    path_cap: int = DEFAULT_PATH_CAP,
) -> Assessment:
    """Evaluate one scenario for one threat source under one control set."""
    scenario = model.scenarios_by_id.get(scenario_id)
    if scenario is None:
        raise KeyError(f"unknown scenario {scenario_id!r}")
    source = model.sources_by_id.get(source_id)
    if source is None:
        raise KeyError(f"unknown threat source {source_id!r}")
    if source_id not in scenario.in_scope_sources:
        raise OutOfScope(
            f"threat source {source_id!r} is not in scope for scenario {scenario_id!r}"
        )
    objectives = model.objectives_by_scenario.get(scenario_id, ())
    if not objectives:
        raise NoTree(f"scenario {scenario_id!r} has no attack tree")

    config_id, enabled = resolve_controls(model, configuration, controls)

    all_scores: list[VectorScore] = []
    per_objective: list[list[VectorScore]] = []
    objective_levels: list[tuple[str, Level]] = []
    for objective in objectives:
        scores = [
            score_vector(vector, source, enabled, model)
            for vector in model.objective_vectors(objective.id)
        ]
        per_objective.append(scores)
        all_scores.extend(scores)
        objective_levels.append((objective.id, objective_likelihood(scores)))

    likelihood = scenario_likelihood([lvl for _, lvl in objective_levels])
    surface = attack_surface(per_objective, path_cap=path_cap)
    return Assessment(
        scenario=scenario_id,
        source=source_id,
        configuration=config_id,
        enabled_controls=tuple(sorted(enabled)),
        vector_scores=tuple(all_scores),
        objective_likelihoods=tuple(objective_levels),
        scenario_likelihood=likelihood,
        impact=scenario.impact,
        risk=risk_rating(likelihood, scenario.impact),
        surface=surface,
    )


@dataclass(frozen=True)
class VectorChange:
    vector: str
    residual: tuple[Level, Level]
    combined: tuple[Level, Level]

    @property
    def changed(self) -> bool:
        return self.residual[0] is not self.residual[1] or self.combined[0] is not self.combined[1]


@dataclass(frozen=True)
class ObjectiveChange:
    objective: str
    likelihood: tuple[Level, Level]

    @property
    def changed(self) -> bool:
        return self.likelihood[0] is not self.likelihood[1]


@dataclass(frozen=True)
class WhatIfDiff:
    """Node-by-node comparison of one scenario under two configurations."""

    scenario: str
    source: str
    base: Assessment
    alt: Assessment
    vectors: tuple[VectorChange, ...]
    objectives: tuple[ObjectiveChange, ...]

    @property
    def risk_delta(self) -> int:
        return self.alt.risk.score - self.base.risk.score

    @property
    def any_change(self) -> bool:
        return (
            any(v.changed for v in self.vectors)
            or any(o.changed for o in self.objectives)
            or self.base.scenario_likelihood is not self.alt.scenario_likelihood
            or self.risk_delta != 0
        )


def whatif_diff(
    model: ThreatModel,
    scenario_id: str,
    source_id: str,
    base: str | Configuration | Iterable[str],
    alt: str | Configuration | Iterable[str],
    path_cap: int = DEFAULT_PATH_CAP,
) -> WhatIfDiff:
    """Assess under two configurations and pair up every node's scores.

    ``base``/``alt`` are configuration ids, Configuration objects, or ad-hoc
    control-id collections.
    """

    def run(spec: str | Configuration | Iterable[str]) -> Assessment:
        if isinstance(spec, Configuration):
            return assess(model, scenario_id, source_id, configuration=spec.id, path_cap=path_cap)
        if isinstance(spec, str):
            return assess(model, scenario_id, source_id, configuration=spec, path_cap=path_cap)
        return assess(model, scenario_id, source_id, controls=spec, path_cap=path_cap)

    base_a = run(base)
    alt_a = run(alt)
    vectors = tuple(
        VectorChange(
            vector=b.vector,
            residual=(b.residual, a.residual),
            combined=(b.combined, a.combined),
        )
        for b, a in zip(base_a.vector_scores, alt_a.vector_scores)
    )
    objectives = tuple(
        ObjectiveChange(objective=b[0], likelihood=(b[1], a[1]))
        for b, a in zip(base_a.objective_likelihoods, alt_a.objective_likelihoods)
    )
    return WhatIfDiff(
        scenario=scenario_id,
        source=source_id,
        base=base_a,
        alt=alt_a,
        vectors=vectors,
        objectives=objectives,
    )
