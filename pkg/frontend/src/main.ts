// Browser entry point: loads the runtime config, mounts the app, and binds
// all interaction through event delegation on data-action attributes.

import { ApiClient, type RuntimeConfig } from "./api.js";
import { App } from "./app.js";
import type { ViewState } from "./state.js";
import type { Label } from "./types.js";

async function loadConfig(): Promise<RuntimeConfig> {
  try {
    const response = await fetch("./config.json");
    if (response.ok) return (await response.json()) as RuntimeConfig;
  } catch {
    // fall through to the same-origin default
  }
  return { apiBase: "" };
}

function collectFilter(form: Element) {
  const value = (sel: string) => (form.querySelector(sel) as HTMLInputElement | null)?.value ?? "";
  const keyword = value('[data-field="filter-keyword"]').trim();
  const languages = value('[data-field="filter-languages"]')
    .split(",")
    .map((s) => s.trim())
    .filter(Boolean);
  const sources = [...form.querySelectorAll('[data-field="filter-source"]:checked')].map(
    (el) => (el as HTMLInputElement).value,
  );
  const from = value('[data-field="filter-from"]');
  const to = value('[data-field="filter-to"]');
  return {
    keyword: keyword || undefined,
    sources: sources.length ? sources : undefined,
    languages: languages.length ? languages : undefined,
    from: from ? new Date(from).toISOString() : undefined,
    to: to ? new Date(to).toISOString() : undefined,
  };
}

async function boot(): Promise<void> {
  const config = await loadConfig();
  const api = new ApiClient(config);
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  root.innerHTML = `
    <div data-slot="nav"></div>
    <div data-slot="heatmap"></div>
    <div data-slot="trends"></div>
    <div data-slot="history"></div>
    <div data-slot="focus"></div>
    <div data-slot="queue"></div>`;

  const app = new App(api, {
    root,
    initialQuery: window.location.search.slice(1),
    onUrlChange: (query) =>
      window.history.replaceState(null, "", query ? `?${query}` : window.location.pathname),
  });

  root.addEventListener("click", (event) => {
    const target = (event.target as Element).closest("[data-action]");
    if (!target) return;
    const action = target.getAttribute("data-action");
    const itemId = target.getAttribute("data-item") ?? "";
    const label = (target.getAttribute("data-label") ?? "") as Label;
    switch (action) {
      case "nav":
        void app.navigate(target.getAttribute("data-view") as ViewState["view"]);
        break;
      case "toggle-relevant":
        void app.setRelevantOnly((target as HTMLInputElement).checked);
        break;
      case "agree":
      case "relabel":
        event.preventDefault();
        void app.submitLabel(itemId, label);
        break;
      case "disagree":
        event.preventDefault();
        app.toggleDisagree(itemId);
        break;
      case "apply-filter": {
        event.preventDefault();
        const form = target.closest("form");
        if (form) {
          void app.applyFilter({
            ...collectFilter(form),
            relevantOnly: app.state.filter.relevantOnly,
          });
        }
        break;
      }
      case "history-apply": {
        event.preventDefault();
        const panel = target.closest(".panel");
        if (panel) {
          const from = (panel.querySelector('[data-field="history-from"]') as HTMLInputElement).value;
          const to = (panel.querySelector('[data-field="history-to"]') as HTMLInputElement).value;
          const bucket = (panel.querySelector('[data-action="history-bucket"]') as HTMLSelectElement)
            .value as ViewState["historyBucket"];
          if (from && to) {
            void app.setHistoryRange(
              new Date(from).toISOString(),
              new Date(to).toISOString(),
              bucket,
            );
          }
        }
        break;
      }
      case "run-pipeline":
        void app.runPipeline();
        break;
    }
  });

  root.addEventListener("change", (event) => {
    const target = event.target as Element;
    if (target.matches('[data-action="trend-window"]')) {
      void app.setTrendWindow((target as HTMLSelectElement).value as ViewState["trendWindow"]);
    }
  });

  await app.refreshView();
}

void boot();
