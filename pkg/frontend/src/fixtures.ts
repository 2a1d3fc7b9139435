/** Hand-written service responses for unit tests. Values are intentionally
 * arbitrary (including a non-matrix risk score) so tests can prove the
 * explorer displays exactly what the service sent, computing nothing. */

import type { AssessClient, AssessResult } from "./api";
import type { AssessmentBody, ModelDoc, WhatIfBody } from "./types";

export function fixtureModel(): ModelDoc {
  return {
    matra_version: "1",
    metadata: { name: "fixture", version: "0" },
    assets: [{ id: "A1", name: "Database" }],
    threat_sources: [
      {
        id: "crook",
        name: "Crook",
        category: "individual",
        nature: "adversarial",
        capability: "low",
      },
      {
        id: "accidental",
        name: "Accidental",
        category: "accidental",
        nature: "non_adversarial",
      },
    ],
    impact_matrix: [],
    scenarios: [
      {
        id: "S1",
        asset: "A1",
        dimensions: ["confidentiality"],
        description: "records leaked",
        impact: "high",
        in_scope_sources: ["crook"],
      },
      {
        id: "S2",
        asset: "A1",
        dimensions: ["integrity"],
        description: "records corrupted",
        impact: "high",
        in_scope_sources: ["crook", "accidental"],
      },
    ],
    trees: {
      objectives: [
        { id: "s1-manip", name: "Manipulation", scenario: "S1" },
        { id: "s1-exfil", name: "Exfiltration", scenario: "S1" },
        { id: "s2-manip", name: "Manipulation", scenario: "S2" },
      ],
      techniques: [
        { id: "s1-inj", name: "Injection", objective: "s1-manip" },
        { id: "s1-tool", name: "Tooling", objective: "s1-exfil" },
        { id: "s2-inj", name: "Injection", objective: "s2-manip" },
      ],
      vectors: [
        {
          id: "s1-email",
          name: "email body",
          technique: "s1-inj",
          skill_required: "low",
          baseline_residual: "high",
        },
        {
          id: "s1-curl",
          name: "curl out",
          technique: "s1-tool",
          skill_required: "moderate",
          baseline_residual: "high",
        },
        {
          id: "s2-email",
          name: "email body",
          technique: "s2-inj",
          skill_required: "low",
          baseline_residual: "high",
        },
      ],
    },
    controls: [
      { id: "sandbox", name: "Sandbox", effects: [{ vector: "s1-curl", residual_with_control: "low" }] },
      { id: "filter", name: "Filter", effects: [{ vector: "s1-email", residual_with_control: "low" }] },
    ],
    configurations: [
      { id: "default", name: "Default", enabled_controls: [] },
      { id: "hardened", name: "Hardened", enabled_controls: ["sandbox", "filter"] },
    ],
  };
}

export function fixtureAssessment(scenario: string, source: string, controls: string[]): AssessmentBody {
  const sandboxed = controls.includes("sandbox");
  return {
    scenario,
    source,
    configuration: null,
    enabled_controls: [...controls].sort(),
    impact: "high",
    scenario_likelihood: sandboxed ? "low" : "high",
    // deliberately NOT a risk-matrix pair: proves the UI does no arithmetic
    risk: sandboxed ? { label: "moderate", score: 3 } : { label: "high", score: 7 },
    objectives: [
      { objective: "s1-manip", likelihood: "high" },
      { objective: "s1-exfil", likelihood: sandboxed ? "low" : "high" },
    ],
    vectors: [
      { vector: "s1-email", adversarial: true, fit_or_inherent: "high", residual: "high", combined: "high" },
      {
        vector: "s1-curl",
        adversarial: true,
        fit_or_inherent: "moderate",
        residual: sandboxed ? "low" : "high",
        combined: sandboxed ? "low" : "high",
      },
    ],
    surface: { path_count: 2, histogram: sandboxed ? { low: 2, moderate: 0, high: 0 } : { low: 0, moderate: 1, high: 1 } },
  };
}

export function fixtureWhatIf(): WhatIfBody {
  return {
    scenario: "S1",
    source: "crook",
    base: {
      configuration: "default",
      enabled_controls: [],
      scenario_likelihood: "high",
      risk: { label: "very_high", score: 9 },
    },
    alt: {
      configuration: "hardened",
      enabled_controls: ["filter", "sandbox"],
      scenario_likelihood: "low",
      risk: { label: "moderate", score: 3 },
    },
    risk_delta: -6,
    objectives: [
      { objective: "s1-manip", base: "high", alt: "high", changed: false },
      { objective: "s1-exfil", base: "high", alt: "low", changed: true },
    ],
    vectors: [
      {
        vector: "s1-email",
        residual_base: "high",
        residual_alt: "low",
        combined_base: "high",
        combined_alt: "low",
        changed: true,
      },
      {
        vector: "s1-curl",
        residual_base: "high",
        residual_alt: "low",
        combined_base: "high",
        combined_alt: "low",
        changed: true,
      },
    ],
  };
}

/** Serves the fixtures synchronously; records every assess call. */
export class FakeClient implements AssessClient {
  calls: string[] = [];
  failNextAssess = false;
  failModel = false;

  async fetchModel(): Promise<ModelDoc> {
    if (this.failModel) throw new Error("connection refused");
    return fixtureModel();
  }

  async assess(scenario: string, source: string, controls: string[]): Promise<AssessResult> {
    this.calls.push(`${scenario}|${source}|${[...controls].sort().join(",")}`);
    if (this.failNextAssess) {
      this.failNextAssess = false;
      throw new Error("boom");
    }
    const body = fixtureAssessment(scenario, source, controls);
    return { body, raw: JSON.stringify(body) };
  }

  async whatif(): Promise<WhatIfBody> {
    return fixtureWhatIf();
  }
}

interface Pending {
  key: string;
  signal?: AbortSignal;
  resolve: (result: AssessResult) => void;
  reject: (error: unknown) => void;
}

/** Lets a test resolve assess() calls out of order to exercise staleness. */
export class ManualClient implements AssessClient {
  pending: Pending[] = [];

  async fetchModel(): Promise<ModelDoc> {
    return fixtureModel();
  }

  assess(scenario: string, source: string, controls: string[], signal?: AbortSignal): Promise<AssessResult> {
    return new Promise((resolve, reject) => {
      this.pending.push({ key: [...controls].sort().join(","), signal, resolve, reject });
    });
  }

  resolveAt(index: number, scenario = "S1", source = "crook"): void {
    const entry = this.pending[index];
    if (!entry) throw new Error(`no pending request at ${index}`);
    const body = fixtureAssessment(scenario, source, entry.key ? entry.key.split(",") : []);
    entry.resolve({ body, raw: JSON.stringify(body) });
  }

  async whatif(): Promise<WhatIfBody> {
    return fixtureWhatIf();
  }
}
