/** Pure HTML renderers. Every level, label, and score in the output is read
 * from a service response; the only local mappings are token -> display text. */

import type { Catalog } from "./explorer";
import type {
  AssessmentBody,
  LevelToken,
  RiskBody,
  TechniqueDoc,
  VectorDoc,
  WhatIfBody,
} from "./types";

const SHORT: Record<LevelToken, string> = { low: "Low", moderate: "Mod", high: "High" };
const RISK_TEXT: Record<string, string> = {
  very_low: "Very Low",
  low: "Low",
  moderate: "Moderate",
  high: "High",
  very_high: "Very High",
};

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function riskText(risk: RiskBody): string {
  return `${RISK_TEXT[risk.label] ?? risk.label} (${risk.score})`;
}

export function renderBadge(assessment: AssessmentBody): string {
  const risk = assessment.risk;
  return (
    `<span class="badge risk-${risk.label}" data-role="risk-badge">${escapeHtml(riskText(risk))}</span>` +
    `<span class="badge-detail">likelihood ${SHORT[assessment.scenario_likelihood]}` +
    ` x impact ${SHORT[assessment.impact]}</span>`
  );
}

export function renderHistogram(assessment: AssessmentBody): string {
  const { histogram, path_count } = assessment.surface;
  const order: LevelToken[] = ["high", "moderate", "low"];
  const bars = order
    .map((token) => {
      const count = histogram[token] ?? 0;
      const width = path_count ? Math.round((count / path_count) * 100) : 0;
      return (
        `<div class="surface-row"><span class="surface-label">${SHORT[token]}</span>` +
        `<div class="surface-bar lvl-${token}" style="width:${width}%"></div>` +
        `<span class="surface-count">${count}</span></div>`
      );
    })
    .join("");
  return `<div class="surface" title="${path_count} complete paths">${bars}</div>`;
}

interface TreeRows {
  techniquesByObjective: Map<string, TechniqueDoc[]>;
  vectorsByTechnique: Map<string, VectorDoc[]>;
}

function treeRows(catalog: Catalog, scenarioId: string): TreeRows {
  const { trees } = catalog.model;
  const objectiveIds = new Set(
    trees.objectives.filter((o) => o.scenario === scenarioId).map((o) => o.id),
  );
  const techniquesByObjective = new Map<string, TechniqueDoc[]>();
  for (const technique of trees.techniques) {
    if (!objectiveIds.has(technique.objective)) continue;
    const list = techniquesByObjective.get(technique.objective) ?? [];
    list.push(technique);
    techniquesByObjective.set(technique.objective, list);
  }
  const vectorsByTechnique = new Map<string, VectorDoc[]>();
  for (const vector of trees.vectors) {
    if (![...techniquesByObjective.values()].some((ts) => ts.some((t) => t.id === vector.technique)))
      continue;
    const list = vectorsByTechnique.get(vector.technique) ?? [];
    list.push(vector);
    vectorsByTechnique.set(vector.technique, list);
  }
  return { techniquesByObjective, vectorsByTechnique };
}

function vectorChain(score: { adversarial: boolean; fit_or_inherent: LevelToken; residual: LevelToken; combined: LevelToken }): string {
  const basis = score.adversarial ? "capfit" : "inherent";
  return `${basis}: ${SHORT[score.fit_or_inherent]} → res: ${SHORT[score.residual]} → ${SHORT[score.combined]}`;
}

/** Collapsible indented tree, annotated from one assessment. Nodes whose
 * combined/likelihood changed against `previous` get the `changed` class. */
export function renderTree(
  catalog: Catalog,
  assessment: AssessmentBody,
  previous: AssessmentBody | null,
): string {
  const scenario = catalog.scenarios.find((s) => s.id === assessment.scenario);
  if (!scenario) return "";
  const rows = treeRows(catalog, scenario.id);
  const scoreByVector = new Map(assessment.vectors.map((v) => [v.vector, v]));
  const prevVector = new Map((previous?.vectors ?? []).map((v) => [v.vector, v]));
  const prevObjective = new Map((previous?.objectives ?? []).map((o) => [o.objective, o]));

  const objectiveHtml = assessment.objectives
    .map((objectiveScore) => {
      const objective = catalog.model.trees.objectives.find(
        (o) => o.id === objectiveScore.objective,
      );
      if (!objective) return "";
      const before = prevObjective.get(objective.id);
      const objChanged = before && before.likelihood !== objectiveScore.likelihood;
      const techniques = rows.techniquesByObjective.get(objective.id) ?? [];
      const techniqueHtml = techniques
        .map((technique) => {
          const vectors = rows.vectorsByTechnique.get(technique.id) ?? [];
          const vectorHtml = vectors
            .map((vector) => {
              const score = scoreByVector.get(vector.id);
              if (!score) return "";
              const beforeVector = prevVector.get(vector.id);
              const changed = beforeVector && beforeVector.combined !== score.combined;
              return (
                `<li class="vector${changed ? " changed" : ""}" data-vector="${escapeHtml(vector.id)}">` +
                `<span class="node-name">${escapeHtml(vector.name)}</span>` +
                `<span class="level lvl-${score.combined}" data-role="vector-combined">${SHORT[score.combined]}</span>` +
                `<span class="chain">(${vectorChain(score)})</span></li>`
              );
            })
            .join("");
          return (
            `<li class="technique"><details open><summary>${escapeHtml(technique.name)}</summary>` +
            `<ul>${vectorHtml}</ul></details></li>`
          );
        })
        .join("");
      return (
        `<li class="objective${objChanged ? " changed" : ""}" data-objective="${escapeHtml(objective.id)}">` +
        `<details open><summary><span class="node-name">${escapeHtml(objective.name)}</span>` +
        `<span class="level lvl-${objectiveScore.likelihood}" data-role="objective-likelihood">` +
        `${SHORT[objectiveScore.likelihood]}</span></summary>` +
        `<ul>${techniqueHtml}</ul></details></li>`
      );
    })
    .join("");

  return (
    `<div class="tree"><div class="tree-root">` +
    `<span class="node-name">${escapeHtml(scenario.id)}: ${escapeHtml(scenario.description ?? "")}</span>` +
    `<span class="level lvl-${assessment.scenario_likelihood}" data-role="scenario-likelihood">` +
    `${SHORT[assessment.scenario_likelihood]}</span></div>` +
    `<ul>${objectiveHtml}</ul></div>`
  );
}

/** The same tree, annotated with two columns from one what-if response. */
export function renderCompareTree(catalog: Catalog, compare: WhatIfBody): string {
  const scenario = catalog.scenarios.find((s) => s.id === compare.scenario);
  if (!scenario) return "";
  const rows = treeRows(catalog, scenario.id);
  const vectorByById = new Map(compare.vectors.map((v) => [v.vector, v]));

  const pair = (base: LevelToken, alt: LevelToken, changed: boolean): string =>
    `<span class="pair${changed ? " changed" : ""}">` +
    `<span class="col-base">${SHORT[base]}</span> / <span class="col-alt">${SHORT[alt]}</span></span>`;

  const objectiveHtml = compare.objectives
    .map((objectiveDiff) => {
      const objective = catalog.model.trees.objectives.find((o) => o.id === objectiveDiff.objective);
      if (!objective) return "";
      const techniques = rows.techniquesByObjective.get(objective.id) ?? [];
      const techniqueHtml = techniques
        .map((technique) => {
          const vectors = rows.vectorsByTechnique.get(technique.id) ?? [];
          const vectorHtml = vectors
            .map((vector) => {
              const diff = vectorByById.get(vector.id);
              if (!diff) return "";
              return (
                `<li class="vector"><span class="node-name">${escapeHtml(vector.name)}</span>` +
                pair(diff.combined_base, diff.combined_alt, diff.changed) +
                `</li>`
              );
            })
            .join("");
          return `<li class="technique">${escapeHtml(technique.name)}<ul>${vectorHtml}</ul></li>`;
        })
        .join("");
      return (
        `<li class="objective"><span class="node-name">${escapeHtml(objective.name)}</span>` +
        pair(objectiveDiff.base, objectiveDiff.alt, objectiveDiff.changed) +
        `<ul>${techniqueHtml}</ul></li>`
      );
    })
    .join("");

  const delta = compare.risk_delta;
  const deltaText = delta > 0 ? `+${delta}` : `${delta}`;
  return (
    `<div class="tree compare">` +
    `<div class="tree-root"><span class="node-name">${escapeHtml(scenario.id)}</span>` +
    pair(compare.base.scenario_likelihood, compare.alt.scenario_likelihood,
         compare.base.scenario_likelihood !== compare.alt.scenario_likelihood) +
    `<span class="risk-pair" data-role="compare-risk">${escapeHtml(riskText(compare.base.risk))} → ` +
    `${escapeHtml(riskText(compare.alt.risk))}</span>` +
    `<span class="delta" data-role="risk-delta">Δ ${deltaText}</span></div>` +
    `<ul>${objectiveHtml}</ul></div>`
  );
}
