"""Attack-tree based, semi-quantitative risk assessment for agentic AI deployments.

The package loads a declarative threat model (assets, threat sources, business
impact matrix, scenario-rooted attack trees, controls), computes likelihood and
risk per impact scenario under any control configuration, and renders the
results as annotated trees, DOT graphs, and risk tables. A CLI and a read-only
HTTP service expose the same engine.
"""

from .engine import (
    Assessment,
    SurfaceProfile,
    VectorScore,
    WhatIfDiff,
    assess,
    attack_surface,
    capability_fit,
    combine_adversarial,
    combine_nonadversarial,
    effective_residual,
    objective_likelihood,
    risk_rating,
    scenario_likelihood,
    score_vector,
    whatif_diff,
)
from .io import (
    Finding,
    Severity,
    ValidationReport,
    assessment_to_dict,
    assessment_to_json,
    load_model,
    load_model_path,
    serialize_model,
    validate_model,
    whatif_to_dict,
    whatif_to_json,
)
from .levels import Level, RiskLabel, RiskRating, level_max, level_min
from .model import (
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
    derive_scenario_impact,
)

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "Asset",
    "AttackVector",
    "CIADimension",
    "Configuration",
    "Control",
    "ControlEffect",
    "Finding",
    "ImpactCell",
    "ImpactScenario",
    "Level",
    "ModelMetadata",
    "Objective",
    "RiskLabel",
    "RiskRating",
    "Severity",
    "SourceCategory",
    "SourceNature",
    "SurfaceProfile",
    "Technique",
    "ThreatModel",
    "ThreatSource",
    "ValidationReport",
    "VectorScore",
    "WhatIfDiff",
    "assess",
    "assessment_to_dict",
    "assessment_to_json",
    "attack_surface",
    "capability_fit",
    "combine_adversarial",
    "combine_nonadversarial",
    "derive_scenario_impact",
    "effective_residual",
    "level_max",
    "level_min",
    "load_model",
    "load_model_path",
    "objective_likelihood",
    "risk_rating",
    "scenario_likelihood",
    "score_vector",
    "serialize_model",
    "validate_model",
    "whatif_diff",
    "whatif_to_dict",
    "whatif_to_json",
]
