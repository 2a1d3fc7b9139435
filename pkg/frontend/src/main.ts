/** Bootstraps the explorer against the service the page is served next to. */

import { HttpClient } from "./api";
import { Explorer } from "./explorer";
import { renderBadge, renderCompareTree, renderHistogram, renderTree, escapeHtml } from "./render";

const client = new HttpClient("");
const explorer = new Explorer(client);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderPickers(): void {
  const state = explorer.getState();
  const catalog = state.catalog;
  if (!catalog) return;

  const scenarioSelect = el<HTMLSelectElement>("scenario");
  scenarioSelect.innerHTML = catalog.scenarios
    .map(
      (s) =>
        `<option value="${escapeHtml(s.id)}"${s.id === state.scenarioId ? " selected" : ""}>` +
        `${escapeHtml(s.id)} — ${escapeHtml(s.description ?? "")}</option>`,
    )
    .join("");

  const sourceSelect = el<HTMLSelectElement>("source");
  const sources = state.scenarioId ? explorer.sourcesFor(state.scenarioId) : [];
  sourceSelect.innerHTML = sources
    .map(
      (s) =>
        `<option value="${escapeHtml(s.id)}"${s.id === state.sourceId ? " selected" : ""}>` +
        `${escapeHtml(s.name)}</option>`,
    )
    .join("");

  const controlsBox = el<HTMLDivElement>("controls");
  controlsBox.innerHTML = catalog.model.controls
    .map((control) => {
      const checked = state.enabledControls.includes(control.id) ? " checked" : "";
      return (
        `<label class="control" title="${escapeHtml(control.description ?? "")}">` +
        `<input type="checkbox" data-control="${escapeHtml(control.id)}"${checked}> ` +
        `${escapeHtml(control.name)}</label>`
      );
    })
    .join("");
  for (const input of controlsBox.querySelectorAll<HTMLInputElement>("input[data-control]")) {
    input.addEventListener("change", () => {
      void explorer.toggleControl(input.dataset.control ?? "");
    });
  }

  const baseSelect = el<HTMLSelectElement>("compare-base");
  const altSelect = el<HTMLSelectElement>("compare-alt");
  const options = catalog.model.configurations
    .map((c) => `<option value="${escapeHtml(c.id)}">${escapeHtml(c.name)}</option>`)
    .join("");
  if (!baseSelect.innerHTML) {
    baseSelect.innerHTML = options;
    altSelect.innerHTML = options;
  }
}

function renderMain(): void {
  const state = explorer.getState();
  const banner = el<HTMLDivElement>("banner");
  if (state.error) {
    banner.innerHTML =
      `<span>${escapeHtml(state.error)}</span> ` +
      `<button id="retry" type="button">Retry</button>`;
    banner.hidden = false;
    el<HTMLButtonElement>("retry").addEventListener("click", () => {
      void (state.catalog ? reassessCurrent() : explorer.loadCatalog());
    });
  } else {
    banner.hidden = true;
    banner.innerHTML = "";
  }

  el<HTMLSpanElement>("status").textContent = state.pending ? "assessing..." : "";

  const badge = el<HTMLDivElement>("risk");
  const surface = el<HTMLDivElement>("surface");
  const tree = el<HTMLDivElement>("tree");
  if (state.compare && state.catalog) {
    tree.innerHTML = renderCompareTree(state.catalog, state.compare);
    badge.innerHTML = "";
    surface.innerHTML = "";
    return;
  }
  if (state.assessment && state.catalog) {
    badge.innerHTML = renderBadge(state.assessment);
    surface.innerHTML = renderHistogram(state.assessment);
    tree.innerHTML = renderTree(state.catalog, state.assessment, state.previous);
  } else {
    badge.innerHTML = "";
    surface.innerHTML = "";
    tree.innerHTML = "";
  }
}

async function reassessCurrent(): Promise<void> {
  const state = explorer.getState();
  if (state.scenarioId && state.sourceId) {
    await explorer.setControls(state.enabledControls);
  }
}

function wire(): void {
  el<HTMLSelectElement>("scenario").addEventListener("change", (event) => {
    void explorer.selectScenario((event.target as HTMLSelectElement).value);
  });
  el<HTMLSelectElement>("source").addEventListener("change", (event) => {
    void explorer.selectSource((event.target as HTMLSelectElement).value);
  });
  el<HTMLButtonElement>("compare-run").addEventListener("click", () => {
    const base = el<HTMLSelectElement>("compare-base").value;
    const alt = el<HTMLSelectElement>("compare-alt").value;
    void explorer.compareConfigurations(base, alt);
  });
  el<HTMLButtonElement>("compare-clear").addEventListener("click", () => {
    explorer.clearCompare();
  });
}

explorer.subscribe(() => {
  renderPickers();
  renderMain();
});

wire();
void explorer.loadCatalog().then(async () => {
  const first = explorer.getState().catalog?.scenarios[0];
  if (first) await explorer.selectScenario(first.id);
});
