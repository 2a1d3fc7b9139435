/** Explorer state machine: selection, control toggling, compare view.
 *
 * Two invariants the UI depends on:
 *  - the displayed assessment always corresponds to the displayed control set
 *    (a response for a superseded toggle is discarded, and the previous
 *    in-flight request is aborted, so at most one is ever outstanding);
 *  - the explorer computes no risk arithmetic of its own — every level, label
 *    and score it exposes comes from a service response body.
 */

import type { AssessClient } from "./api";
import type { AssessmentBody, ModelDoc, ScenarioDoc, SourceDoc, WhatIfBody } from "./types";

export interface Catalog {
  model: ModelDoc;
  scenarios: ScenarioDoc[];
  sourcesById: Map<string, SourceDoc>;
}

export interface ExplorerState {
  catalog: Catalog | null;
  scenarioId: string | null;
  sourceId: string | null;
  enabledControls: string[]; // sorted
  assessment: AssessmentBody | null;
  assessmentRaw: string | null;
  /** The assessment displayed before the latest one; drives change highlights. */
  previous: AssessmentBody | null;
  compare: WhatIfBody | null;
  pending: boolean;
  error: string | null;
}

type Listener = (state: ExplorerState) => void;

const INITIAL: ExplorerState = {
  catalog: null,
  scenarioId: null,
  sourceId: null,
  enabledControls: [],
  assessment: null,
  assessmentRaw: null,
  previous: null,
  compare: null,
  pending: false,
  error: null,
};

export class Explorer {
  private state: ExplorerState = INITIAL;
  private listeners: Listener[] = [];
  private requestSeq = 0;
  private inflight: AbortController | null = null;

  constructor(private readonly client: AssessClient) {}

  getState(): ExplorerState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /** Populate the pickers from GET /model. Out-of-scope pairs are never offered:
   * the source picker for a scenario lists only its in-scope sources. */
  async loadCatalog(): Promise<void> {
    this.set({ pending: true, error: null });
    let model: ModelDoc;
    try {
      model = await this.client.fetchModel();
    } catch (error) {
      this.set({ pending: false, error: `service unreachable: ${describe(error)}` });
      return;
    }
    const catalog: Catalog = {
      model,
      scenarios: model.scenarios,
      sourcesById: new Map(model.threat_sources.map((s) => [s.id, s])),
    };
    this.set({ catalog, pending: false });
  }

  /** Sources offerable for a scenario, in model declaration order. */
  sourcesFor(scenarioId: string): SourceDoc[] {
    const catalog = this.state.catalog;
    if (!catalog) return [];
    const scenario = catalog.scenarios.find((s) => s.id === scenarioId);
    if (!scenario) return [];
    return catalog.model.threat_sources.filter((s) => scenario.in_scope_sources.includes(s.id));
  }

  async selectScenario(scenarioId: string): Promise<void> {
    const sources = this.sourcesFor(scenarioId);
    const first = sources[0];
    this.set({
      scenarioId,
      sourceId: first ? first.id : null,
      enabledControls: [],
      assessment: null,
      assessmentRaw: null,
      previous: null,
      compare: null,
    });
    if (first) await this.reassess();
  }

  async selectSource(sourceId: string): Promise<void> {
    this.set({ sourceId, assessment: null, assessmentRaw: null, previous: null, compare: null });
    await this.reassess();
  }

  /** Flip one control and reassess under the new set. */
  async toggleControl(controlId: string): Promise<void> {
    const enabled = new Set(this.state.enabledControls);
    if (enabled.has(controlId)) {
      enabled.delete(controlId);
    } else {
      enabled.add(controlId);
    }
    this.set({ enabledControls: [...enabled].sort() });
    await this.reassess();
  }

  async setControls(controls: string[]): Promise<void> {
    this.set({ enabledControls: [...controls].sort() });
    await this.reassess();
  }

  private async reassess(): Promise<void> {
    const { scenarioId, sourceId, enabledControls } = this.state;
    if (!scenarioId || !sourceId) return;

    const seq = ++this.requestSeq;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    this.set({ pending: true, error: null });
    try {
      const result = await this.client.assess(scenarioId, sourceId, enabledControls, controller.signal);
      if (seq !== this.requestSeq) return; // superseded while in flight
      this.set({
        previous: this.state.assessment,
        assessment: result.body,
        assessmentRaw: result.raw,
        pending: false,
      });
    } catch (error) {
      if (seq !== this.requestSeq) return;
      // keep the previous assessment on display; just surface the failure
      this.set({ pending: false, error: describe(error) });
    }
  }

  /** Side-by-side view of two named configurations, via GET /whatif. */
  async compareConfigurations(baseId: string, altId: string): Promise<void> {
    const { scenarioId, sourceId } = this.state;
    if (!scenarioId || !sourceId) return;
    this.set({ pending: true, error: null });
    try {
      const diff = await this.client.whatif(scenarioId, sourceId, baseId, altId);
      this.set({ compare: diff, pending: false });
    } catch (error) {
      this.set({ pending: false, error: describe(error) });
    }
  }

  clearCompare(): void {
    this.set({ compare: null });
  }
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
