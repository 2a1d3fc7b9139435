"""Shared test machinery: an independent path oracle, a random-model generator,
and a narrow DOT parser for well-formedness checks."""

from __future__ import annotations

import re

from hypothesis import strategies as st

from matra.levels import Level
from matra.model import (
    Asset,
    AttackVector,
    CIADimension,
    Configuration,
    Control,
    ControlEffect,
    ImpactCell,
    ImpactScenario,
    ModelMetadata,
    Objective,
    SourceCategory,
    SourceNature,
    Technique,
    ThreatModel,
    ThreatSource,
)

LEVELS = [Level.LOW, Level.MODERATE, Level.HIGH]


# ---------------------------------------------------------------------------
# independent attack-surface oracle
# ---------------------------------------------------------------------------


def surface_oracle(per_objective_levels: list[list[Level]]) -> dict[Level, int]:
    """Brute-force path histogram by explicit recursion.

    Written independently of the engine's itertools-based enumeration: walks
    the choice tree one objective at a time, carrying the running minimum.
    """
    counts = {lvl: 0 for lvl in Level}

    def walk(index: int, running_min: Level | None) -> None:
        if index == len(per_objective_levels):
            assert running_min is not None
            counts[running_min] += 1
            return
        for level in per_objective_levels[index]:
            nxt = level if running_min is None or level < running_min else running_min
            walk(index + 1, nxt)

    walk(0, None)
    return counts


def per_objective_levels(model: ThreatModel, assessment) -> list[list[Level]]:
    """Per-objective combined levels, straight from the document structure."""
    out = []
    for objective in model.objectives_by_scenario[assessment.scenario]:
        out.append(
            [assessment.score_of(v.id).combined for v in model.objective_vectors(objective.id)]
        )
    return out


# ---------------------------------------------------------------------------
# random small models
# ---------------------------------------------------------------------------

levels_st = st.sampled_from(LEVELS)


def _level_at_most(ceiling: Level) -> st.SearchStrategy[Level]:
    return st.sampled_from([lvl for lvl in LEVELS if lvl <= ceiling])


@st.composite
def small_models(draw) -> ThreatModel:
    """A tiny, always-valid model: one asset, one scenario, a 1-3 objective tree."""
    has_adversarial = draw(st.booleans())
    has_accidental = draw(st.booleans()) if has_adversarial else True

    sources = []
    if has_adversarial:
        sources.append(
            ThreatSource(
                id="adv",
                name="Adversary",
                category=SourceCategory.INDIVIDUAL,
                subtype="Outsider",
                nature=SourceNature.ADVERSARIAL,
                capability=draw(levels_st),
            )
        )
    if has_accidental:
        sources.append(
            ThreatSource(
                id="acc",
                name="Accidental",
                category=SourceCategory.ACCIDENTAL,
                subtype="User error",
                nature=SourceNature.NON_ADVERSARIAL,
            )
        )

    dimensions = frozenset(
        draw(st.sets(st.sampled_from(list(CIADimension)), min_size=1, max_size=2))
    )
    cells = []
    ratings = []
    for dimension in sorted(dimensions, key=lambda d: d.value):
        for source in sources:
            rating = draw(levels_st)
            ratings.append(rating)
            cells.append(
                ImpactCell(
                    asset="asset-1",
                    dimension=dimension,
                    source_key=source.nature.value,
                    rating=rating,
                )
            )
    impact = max(ratings)

    objectives = []
    techniques = []
    vectors = []
    n_objectives = draw(st.integers(1, 3))
    for oi in range(n_objectives):
        objective = Objective(id=f"ob{oi}", name=f"Objective {oi}", scenario="S1")
        objectives.append(objective)
        for ti in range(draw(st.integers(1, 2))):
            technique = Technique(id=f"te{oi}-{ti}", name=f"Technique {oi}.{ti}", objective=objective.id)
            techniques.append(technique)
            for vi in range(draw(st.integers(1, 2))):
                vectors.append(
                    AttackVector(
                        id=f"ve{oi}-{ti}-{vi}",
                        name=f"Vector {oi}.{ti}.{vi}",
                        technique=technique.id,
                        baseline_residual=draw(levels_st),
                        skill_required=draw(levels_st) if has_adversarial else None,
                        inherent_likelihood=draw(levels_st) if has_accidental else None,
                    )
                )

    controls = []
    for ci in range(draw(st.integers(0, 3))):
        targets = draw(
            st.sets(st.sampled_from([v.id for v in vectors]), min_size=1, max_size=len(vectors))
        )
        effects = tuple(
            ControlEffect(
                vector=vid,
                residual_with_control=draw(
                    _level_at_most(next(v for v in vectors if v.id == vid).baseline_residual)
                ),
            )
            for vid in sorted(targets)
        )
        controls.append(Control(id=f"ctl{ci}", name=f"Control {ci}", effects=effects))

    configurations = [Configuration(id="default", name="Default")]
    control_ids = [c.id for c in controls]
    for gi in range(draw(st.integers(0, 2))):
        enabled = frozenset(
            draw(st.sets(st.sampled_from(control_ids), max_size=len(control_ids)))
        ) if control_ids else frozenset()
        configurations.append(Configuration(id=f"cfg{gi}", name=f"Config {gi}", enabled_controls=enabled))

    scenario = ImpactScenario(
        id="S1",
        asset="asset-1",
        dimensions=dimensions,
        description="generated scenario",
        impact=impact,
        in_scope_sources=frozenset(s.id for s in sources),
    )
    return ThreatModel(
        metadata=ModelMetadata(name="generated", version="0"),
        assets=(Asset(id="asset-1", name="Asset 1"),),
        threat_sources=tuple(sources),
        impact_matrix=tuple(cells),
        scenarios=(scenario,),
        objectives=tuple(objectives),
        techniques=tuple(techniques),
        vectors=tuple(vectors),
        controls=tuple(controls),
        configurations=tuple(configurations),
    )


@st.composite
def model_and_control_sets(draw):
    """A model plus nested control sets C ⊆ C' and a source id to assess."""
    model = draw(small_models())
    control_ids = [c.id for c in model.controls]
    smaller = draw(st.sets(st.sampled_from(control_ids), max_size=len(control_ids))) if control_ids else set()
    extra = (
        draw(st.sets(st.sampled_from(control_ids), max_size=len(control_ids)))
        if control_ids
        else set()
    )
    larger = smaller | extra
    source_id = draw(st.sampled_from([s.id for s in model.threat_sources]))
    return model, frozenset(smaller), frozenset(larger), source_id


# ---------------------------------------------------------------------------
# published tree goldens: every annotation of the three worked scenarios
# ---------------------------------------------------------------------------

_L, _M, _H = Level.LOW, Level.MODERATE, Level.HIGH

# Per (scenario, source): per configuration, the scenario likelihood, the
# objective levels, each vector's (fit-or-inherent, residual, combined) chain,
# and the resulting (risk label value, score).
FIGURE_GOLDENS = [
    {
        "scenario": "IS6",
        "source": "malicious-customer",
        "configs": {
            "default": {
                "scenario_likelihood": _H,
                "risk": ("very_high", 9),
                "objectives": {"is6-obj-manipulation": _H, "is6-obj-exfiltration": _H},
                "vectors": {
                    "is6-vec-email-attachment": (_H, _H, _H),
                    "is6-vec-email-body": (_H, _H, _H),
                    "is6-vec-exec-curl": (_M, _H, _H),
                    "is6-vec-message-email": (_H, _H, _H),
                    "is6-vec-telegram-image": (_H, _H, _H),
                    "is6-vec-telegram-link": (_M, _M, _M),
                },
            },
            "sandbox": {
                "scenario_likelihood": _H,
                "risk": ("very_high", 9),
                "objectives": {"is6-obj-manipulation": _H, "is6-obj-exfiltration": _H},
                "vectors": {
                    "is6-vec-email-attachment": (_H, _H, _H),
                    "is6-vec-email-body": (_H, _H, _H),
                    "is6-vec-exec-curl": (_M, _L, _L),
                    "is6-vec-message-email": (_H, _H, _H),
                    "is6-vec-telegram-image": (_H, _H, _H),
                    "is6-vec-telegram-link": (_M, _M, _M),
                },
            },
        },
    },
    {
        "scenario": "IS5",
        "source": "competitor",
        "configs": {
            "default": {
                "scenario_likelihood": _H,
                "risk": ("very_high", 9),
                "objectives": {"is5-obj-manipulation": _H, "is5-obj-resource": _H},
                "vectors": {
                    "is5-vec-web-page": (_H, _H, _H),
                    "is5-vec-email-attachment": (_H, _H, _H),
                    "is5-vec-cartesian-join": (_M, _H, _H),
                    "is5-vec-table-scan": (_M, _H, _H),
                    "is5-vec-concurrent-sessions": (_M, _H, _H),
                },
            },
            "guardrails": {
                "scenario_likelihood": _L,
                "risk": ("moderate", 3),
                "objectives": {"is5-obj-manipulation": _H, "is5-obj-resource": _L},
                "vectors": {
                    "is5-vec-web-page": (_H, _H, _H),
                    "is5-vec-email-attachment": (_H, _H, _H),
                    "is5-vec-cartesian-join": (_M, _L, _L),
                    "is5-vec-table-scan": (_M, _L, _L),
                    "is5-vec-concurrent-sessions": (_M, _L, _L),
                },
            },
        },
    },
    {
        "scenario": "IS8",
        "source": "accidental",
        "configs": {
            "default": {
                "scenario_likelihood": _M,
                "risk": ("high", 6),
                "objectives": {"is8-obj-unexpected": _M, "is8-obj-action": _H},
                "vectors": {
                    "is8-vec-incorrect-sql": (_M, _H, _M),
                    "is8-vec-psql-destructive": (_H, _H, _H),
                },
            },
            "readonly": {
                "scenario_likelihood": _L,
                "risk": ("moderate", 3),
                "objectives": {"is8-obj-unexpected": _M, "is8-obj-action": _L},
                "vectors": {
                    "is8-vec-incorrect-sql": (_M, _H, _M),
                    "is8-vec-psql-destructive": (_H, _L, _L),
                },
            },
        },
    },
]


def assert_figure_golden(model, golden: dict) -> int:
    """Assert every point value of one golden entry; returns assertion count."""
    from matra.engine import assess

    checked = 0
    for config_id, expected in golden["configs"].items():
        a = assess(model, golden["scenario"], golden["source"], configuration=config_id)
        assert a.scenario_likelihood is expected["scenario_likelihood"]
        label, score = expected["risk"]
        assert a.risk.label.value == label and a.risk.score == score
        checked += 2
        for objective_id, level in expected["objectives"].items():
            assert a.objective_likelihood_of(objective_id) is level, (config_id, objective_id)
            checked += 1
        for vector_id, (basis, residual, combined) in expected["vectors"].items():
            score_ = a.score_of(vector_id)
            assert score_.fit_or_inherent is basis, (config_id, vector_id, "basis")
            assert score_.residual is residual, (config_id, vector_id, "residual")
            assert score_.combined is combined, (config_id, vector_id, "combined")
            checked += 3
    return checked


# ---------------------------------------------------------------------------
# DOT parsing (the emitted subset)
# ---------------------------------------------------------------------------

_DOT_HEADER = re.compile(r'^digraph "(?P<name>(?:[^"\\]|\\.)*)" \{$')
_DOT_NODE = re.compile(r'^\s*"(?P<id>(?:[^"\\]|\\.)*)" \[(?P<attrs>.*)\];$')
_DOT_EDGE = re.compile(r'^\s*"(?P<tail>(?:[^"\\]|\\.)*)" -> "(?P<head>(?:[^"\\]|\\.)*)";$')
_DOT_PLAIN = re.compile(r"^\s*(rankdir=\w+|node \[.*\]);$")


class ParsedDot:
    def __init__(self, name: str, nodes: dict[str, str], edges: list[tuple[str, str]]):
        self.name = name
        self.nodes = nodes
        self.edges = edges


def parse_dot(text: str) -> ParsedDot:
    """Parse the digraph subset the exporter emits; raises on anything else."""
    lines = text.strip().splitlines()
    header = _DOT_HEADER.match(lines[0])
    if not header:
        raise ValueError(f"bad digraph header: {lines[0]!r}")
    if lines[-1] != "}":
        raise ValueError("digraph not closed")
    nodes: dict[str, str] = {}
    edges: list[tuple[str, str]] = []
    for line in lines[1:-1]:
        if _DOT_PLAIN.match(line):
            continue
        edge = _DOT_EDGE.match(line)
        if edge:
            edges.append((edge.group("tail"), edge.group("head")))
            continue
        node = _DOT_NODE.match(line)
        if node:
            nodes[node.group("id")] = node.group("attrs")
            continue
        raise ValueError(f"unparseable DOT line: {line!r}")
    for tail, head in edges:
        if tail not in nodes or head not in nodes:
            raise ValueError(f"edge references undeclared node: {tail} -> {head}")
    return ParsedDot(header.group("name"), nodes, edges)
