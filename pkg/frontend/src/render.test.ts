import { describe, expect, it } from "vitest";

import type { Catalog } from "./explorer";
import { fixtureAssessment, fixtureModel, fixtureWhatIf } from "./fixtures";
import { escapeHtml, renderBadge, renderCompareTree, renderHistogram, renderTree, riskText } from "./render";

function catalog(): Catalog {
  const model = fixtureModel();
  return {
    model,
    scenarios: model.scenarios,
    sourcesById: new Map(model.threat_sources.map((s) => [s.id, s])),
  };
}

describe("badge", () => {
  it("prints the served label and score verbatim", () => {
    const html = renderBadge(fixtureAssessment("S1", "crook", []));
    expect(html).toContain(">High (7)<");
    expect(html).toContain("risk-high");
    expect(html).toContain("likelihood High x impact High");
  });

  it("maps label tokens to display text only", () => {
    expect(riskText({ label: "very_high", score: 9 })).toBe("Very High (9)");
    expect(riskText({ label: "moderate", score: 3 })).toBe("Moderate (3)");
  });
});

describe("tree", () => {
  it("shows the full scoring chain per vector", () => {
    const html = renderTree(catalog(), fixtureAssessment("S1", "crook", ["sandbox"]), null);
    expect(html).toContain("capfit: Mod → res: Low → Low");
    expect(html).toContain("capfit: High → res: High → High");
    expect(html).toContain('data-role="scenario-likelihood">Low');
  });

  it("highlights nodes whose combined level changed", () => {
    const before = fixtureAssessment("S1", "crook", []);
    const after = fixtureAssessment("S1", "crook", ["sandbox"]);
    const html = renderTree(catalog(), after, before);
    expect(html).toContain('class="vector changed" data-vector="s1-curl"');
    expect(html).toContain('class="vector" data-vector="s1-email"');
    expect(html).toContain('class="objective changed" data-objective="s1-exfil"');
  });

  it("renders nothing for an unknown scenario", () => {
    const body = { ...fixtureAssessment("S1", "crook", []), scenario: "S9" };
    expect(renderTree(catalog(), body, null)).toBe("");
  });
});

describe("surface histogram", () => {
  it("draws one bar per level with served counts", () => {
    const html = renderHistogram(fixtureAssessment("S1", "crook", []));
    expect(html).toContain('title="2 complete paths"');
    expect(html.match(/surface-row/g)).toHaveLength(3);
    expect(html).toContain('<span class="surface-count">1</span>');
  });
});

describe("compare tree", () => {
  it("renders two columns and the served delta", () => {
    const html = renderCompareTree(catalog(), fixtureWhatIf());
    expect(html).toContain("Δ -6");
    expect(html).toContain("Very High (9)");
    expect(html).toContain("Moderate (3)");
    expect(html).toContain('<span class="col-base">High</span> / <span class="col-alt">Low</span>');
  });
});

describe("escaping", () => {
  it("escapes markup in names", () => {
    expect(escapeHtml('<img src="x">')).toBe("&lt;img src=&quot;x&quot;&gt;");
  });
});
