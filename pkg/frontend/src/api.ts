/** Thin typed client for the matra service. Keeps raw bodies so callers can
 * prove that displayed values are exactly what the service sent. */

import type { AssessmentBody, ModelDoc, ServiceErrorBody, WhatIfBody } from "./types";

export interface AssessResult {
  body: AssessmentBody;
  raw: string;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface AssessClient {
  fetchModel(): Promise<ModelDoc>;
  assess(scenario: string, source: string, controls: string[], signal?: AbortSignal): Promise<AssessResult>;
  whatif(scenario: string, source: string, base: string, alt: string): Promise<WhatIfBody>;
}

async function fail(response: Response): Promise<never> {
  let code = "error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as ServiceErrorBody;
    code = body.error.code;
    message = body.error.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(response.status, code, message);
}

export class HttpClient implements AssessClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async fetchModel(): Promise<ModelDoc> {
    const response = await this.fetchFn(`${this.baseUrl}/model`);
    if (!response.ok) await fail(response);
    return (await response.json()) as ModelDoc;
  }

  async assess(
    scenario: string,
    source: string,
    controls: string[],
    signal?: AbortSignal,
  ): Promise<AssessResult> {
    const params = new URLSearchParams({
      scenario,
      source,
      controls: controls.join(","),
    });
    const response = await this.fetchFn(`${this.baseUrl}/assess?${params}`, { signal });
    if (!response.ok) await fail(response);
    const raw = await response.text();
    return { body: JSON.parse(raw) as AssessmentBody, raw };
  }

  async whatif(scenario: string, source: string, base: string, alt: string): Promise<WhatIfBody> {
    const params = new URLSearchParams({ scenario, source, base, alt });
    const response = await this.fetchFn(`${this.baseUrl}/whatif?${params}`);
    if (!response.ok) await fail(response);
    return (await response.json()) as WhatIfBody;
  }
}
