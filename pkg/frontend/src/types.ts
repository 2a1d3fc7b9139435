/** Wire types for the matra service endpoints. */

export type LevelToken = "low" | "moderate" | "high";
export type RiskLabelToken = "very_low" | "low" | "moderate" | "high" | "very_high";

export interface RiskBody {
  label: RiskLabelToken;
  score: number;
}

export interface VectorScoreBody {
  vector: string;
  adversarial: boolean;
  fit_or_inherent: LevelToken;
  residual: LevelToken;
  combined: LevelToken;
}

export interface ObjectiveScoreBody {
  objective: string;
  likelihood: LevelToken;
}

export interface SurfaceBody {
  path_count: number;
  histogram: Record<LevelToken, number>;
}

export interface AssessmentBody {
  scenario: string;
  source: string;
  configuration: string | null;
  enabled_controls: string[];
  impact: LevelToken;
  scenario_likelihood: LevelToken;
  risk: RiskBody;
  objectives: ObjectiveScoreBody[];
  vectors: VectorScoreBody[];
  surface: SurfaceBody;
}

export interface WhatIfSideBody {
  configuration: string | null;
  enabled_controls: string[];
  scenario_likelihood: LevelToken;
  risk: RiskBody;
}

export interface WhatIfObjectiveBody {
  objective: string;
  base: LevelToken;
  alt: LevelToken;
  changed: boolean;
}

export interface WhatIfVectorBody {
  vector: string;
  residual_base: LevelToken;
  residual_alt: LevelToken;
  combined_base: LevelToken;
  combined_alt: LevelToken;
  changed: boolean;
}

export interface WhatIfBody {
  scenario: string;
  source: string;
  base: WhatIfSideBody;
  alt: WhatIfSideBody;
  risk_delta: number;
  objectives: WhatIfObjectiveBody[];
  vectors: WhatIfVectorBody[];
}

// --- the model document (the slice the explorer needs) ---------------------

export interface SourceDoc {
  id: string;
  name: string;
  category: string;
  subtype?: string;
  nature: "adversarial" | "non_adversarial";
  capability?: LevelToken;
}

export interface ScenarioDoc {
  id: string;
  asset: string;
  dimensions: string[];
  description?: string;
  impact: LevelToken;
  in_scope_sources: string[];
}

export interface ObjectiveDoc {
  id: string;
  name: string;
  scenario: string;
}

export interface TechniqueDoc {
  id: string;
  name: string;
  objective: string;
  catalog_refs?: string[];
}

export interface VectorDoc {
  id: string;
  name: string;
  technique: string;
  skill_required?: LevelToken;
  inherent_likelihood?: LevelToken;
  baseline_residual: LevelToken;
  notes?: string;
}

export interface ControlDoc {
  id: string;
  name: string;
  description?: string;
  effects?: { vector: string; residual_with_control: LevelToken }[];
}

export interface ConfigurationDoc {
  id: string;
  name: string;
  enabled_controls: string[];
}

export interface ModelDoc {
  matra_version: string;
  metadata: { name: string; version: string };
  assets: { id: string; name: string; description?: string }[];
  threat_sources: SourceDoc[];
  impact_matrix: unknown[];
  scenarios: ScenarioDoc[];
  trees: {
    objectives: ObjectiveDoc[];
    techniques: TechniqueDoc[];
    vectors: VectorDoc[];
  };
  controls: ControlDoc[];
  configurations: ConfigurationDoc[];
}

export interface ServiceErrorBody {
  error: { code: string; message: string };
}
