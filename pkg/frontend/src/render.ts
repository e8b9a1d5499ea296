// Pure HTML renderers: every number shown comes verbatim from an API
// payload, never recomputed client-side. Interactive elements carry
// data-action attributes that app.ts binds through event delegation.

import type {
  FocusRecord,
  HeatmapResponse,
  HistoryResponse,
  ReviewCandidate,
  TrendsResponse,
} from "./types.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const WEEKDAYS = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"];

export function renderHeatmap(data: HeatmapResponse, relevantOnly: boolean): string {
  const peak = Math.max(1, ...data.cells.flat());
  const rows = data.cells
    .map((row, day) => {
      const cells = row
        .map((count) => {
          const alpha = count === 0 ? 0 : 0.15 + 0.85 * (count / peak);
          return `<td class="hm-cell" title="${WEEKDAYS[day]} ${count}" style="background: rgba(47,111,237,${alpha.toFixed(3)})">${count > 0 ? count : ""}</td>`;
        })
        .join("");
      return `<tr><th>${WEEKDAYS[day]}</th>${cells}</tr>`;
    })
    .join("");
  const hours = Array.from({ length: 24 }, (_, h) => `<th>${h}</th>`).join("");
  return `
    <div class="panel heatmap" data-widget="heatmap">
      <div class="panel-head">
        <h2>When do users write?</h2>
        <label class="toggle">
          <input type="checkbox" data-action="toggle-relevant" ${relevantOnly ? "checked" : ""}>
          relevant feedback only
        </label>
        <span class="total">${data.total} items</span>
      </div>
      <table class="hm-table"><thead><tr><th></th>${hours}</tr></thead><tbody>${rows}</tbody></table>
    </div>`;
}

function deltaArrow(delta: number | null): string {
  if (delta === null) return `<span class="delta none">–</span>`;
  if (delta > 0) return `<span class="delta up">▲ +${delta}</span>`;
  if (delta < 0) return `<span class="delta down">▼ ${delta}</span>`;
  return `<span class="delta flat">→ 0</span>`;
}

function sentimentText(value: number | null): string {
  return value === null ? "n/a" : value.toFixed(2);
}

export function renderTrendCards(data: TrendsResponse): string {
  const sentimentDelta =
    data.deltas.sentiment === null
      ? `<span class="delta none">–</span>`
      : data.deltas.sentiment > 0
        ? `<span class="delta up">▲ +${data.deltas.sentiment.toFixed(2)}</span>`
        : data.deltas.sentiment < 0
          ? `<span class="delta down">▼ ${data.deltas.sentiment.toFixed(2)}</span>`
          : `<span class="delta flat">→ 0.00</span>`;
  return `
    <div class="panel trends" data-widget="trends">
      <div class="panel-head">
        <h2>Trends</h2>
        <select data-action="trend-window">
          ${["day", "week", "month"].map((w) => `<option value="${w}" ${w === data.window ? "selected" : ""}>${w}</option>`).join("")}
        </select>
      </div>
      <div class="cards">
        <div class="card" data-metric="problems">
          <div class="card-label">Problem reports</div>
          <div class="card-value">${data.problem_count}</div>
          ${deltaArrow(data.deltas.problems)}
        </div>
        <div class="card" data-metric="inquiries">
          <div class="card-label">Inquiries</div>
          <div class="card-value">${data.inquiry_count}</div>
          ${deltaArrow(data.deltas.inquiries)}
        </div>
        <div class="card" data-metric="sentiment">
          <div class="card-label">Sentiment</div>
          <div class="card-value">${sentimentText(data.avg_sentiment)}</div>
          ${sentimentDelta}
        </div>
      </div>
    </div>`;
}

export function renderHistoryChart(
  data: HistoryResponse,
  range: { from?: string; to?: string },
): string {
  const width = 720;
  const height = 200;
  const n = data.points.length;
  const peak = Math.max(
    1,
    ...data.points.map((p) => Math.max(p.problem_count, p.inquiry_count, p.irrelevant_count)),
  );
  const x = (i: number) => (n <= 1 ? 0 : (i / (n - 1)) * width);
  const yCount = (v: number) => height - (v / peak) * height;
  const ySent = (v: number) => height / 2 - (v * height) / 2;

  const line = (pick: (p: (typeof data.points)[number]) => number) =>
    data.points.map((p, i) => `${x(i).toFixed(1)},${yCount(pick(p)).toFixed(1)}`).join(" ");
  const sentPoints = data.points
    .map((p, i) => (p.avg_sentiment === null ? null : `${x(i).toFixed(1)},${ySent(p.avg_sentiment).toFixed(1)}`))
    .filter((p): p is string => p !== null)
    .join(" ");

  const svg =
    n === 0
      ? `<p class="empty">no data in range</p>`
      : `<svg viewBox="0 0 ${width} ${height}" class="history-chart" preserveAspectRatio="none">
          <polyline class="series problems" fill="none" points="${line((p) => p.problem_count)}"/>
          <polyline class="series inquiries" fill="none" points="${line((p) => p.inquiry_count)}"/>
          <polyline class="series irrelevant" fill="none" points="${line((p) => p.irrelevant_count)}"/>
          ${sentPoints ? `<polyline class="series sentiment" fill="none" points="${sentPoints}"/>` : ""}
        </svg>`;
  return `
    <div class="panel history" data-widget="history">
      <div class="panel-head">
        <h2>Historical analysis</h2>
        <input type="datetime-local" data-field="history-from" value="${esc(range.from ?? "")}">
        <input type="datetime-local" data-field="history-to" value="${esc(range.to ?? "")}">
        <select data-action="history-bucket">
          ${["hour", "day", "week"].map((b) => `<option value="${b}" ${b === data.bucket ? "selected" : ""}>${b}</option>`).join("")}
        </select>
        <button data-action="history-apply">apply</button>
      </div>
      <div class="legend">
        <span class="series problems">problems</span>
        <span class="series inquiries">inquiries</span>
        <span class="series irrelevant">irrelevant</span>
        <span class="series sentiment">sentiment</span>
      </div>
      ${svg}
    </div>`;
}

function reviewControls(
  itemId: string,
  modelLabel: string,
  allowed: string[],
  expanded: boolean,
  pending: boolean,
): string {
  if (pending) return `<span class="pending">saving…</span>`;
  const agree = `<button data-action="agree" data-item="${esc(itemId)}" data-label="${esc(modelLabel)}">agree</button>`;
  if (!expanded) {
    return `${agree} <button data-action="disagree" data-item="${esc(itemId)}">disagree</button>`;
  }
  const alternatives = allowed
    .map(
      (label) =>
        `<button data-action="relabel" data-item="${esc(itemId)}" data-label="${esc(label)}">${esc(label)}</button>`,
    )
    .join(" ");
  return `${agree} <span class="relabel-options">${alternatives}</span>`;
}

export function renderFocusRow(
  record: FocusRecord,
  options: { expanded: boolean; pending: boolean; notice?: string },
): string {
  const item = record.item;
  const classification = record.classification;
  const labelable = record.review.labelable;
  const controls =
    labelable && classification
      ? reviewControls(
          item.id,
          classification.label,
          record.review.allowed_relabels,
          options.expanded,
          options.pending,
        )
      : "";
  const badge = record.label_event
    ? `<span class="badge human">labeled: ${esc(record.label_event.assigned_label)}</span>`
    : classification
      ? `<span class="badge model ${record.review.uncertain ? "uncertain" : ""}">${esc(classification.label)}${record.review.uncertain ? " (uncertain)" : ""}</span>`
      : `<span class="badge pending-model">unclassified</span>`;
  const sentiment = record.sentiment
    ? `<span class="sentiment ${record.sentiment.polarity}">${record.sentiment.value.toFixed(2)}</span>`
    : "";
  return `
    <li class="focus-row" data-item-row="${esc(item.id)}">
      <div class="row-main">
        <span class="source">${esc(item.source)}</span>
        <span class="lang">${esc(item.language)}</span>
        <time>${esc(item.created_at)}</time>
        ${badge} ${sentiment}
        <p class="text">${esc(item.text)}</p>
      </div>
      <div class="row-review">${controls}</div>
      ${options.notice ? `<div class="notice">${esc(options.notice)}</div>` : ""}
    </li>`;
}

export function renderFocusView(
  kind: "problems" | "inquiries",
  data: { total: number; items: FocusRecord[] },
  ui: {
    keyword: string;
    sources: string[];
    languages: string[];
    from: string;
    to: string;
    expanded: Set<string>;
    pending: Set<string>;
    notices: Map<string, string>;
  },
): string {
  const rows = data.items
    .map((record) =>
      renderFocusRow(record, {
        expanded: ui.expanded.has(record.item.id),
        pending: ui.pending.has(record.item.id),
        notice: ui.notices.get(record.item.id),
      }),
    )
    .join("");
  const sourceOptions = ["app_store", "microblog", "custom"]
    .map(
      (s) =>
        `<label><input type="checkbox" data-field="filter-source" value="${s}" ${ui.sources.includes(s) ? "checked" : ""}>${s}</label>`,
    )
    .join(" ");
  return `
    <div class="panel focus" data-widget="focus-${kind}">
      <div class="panel-head">
        <h2>${kind === "problems" ? "Problem reports" : "Inquiries"}</h2>
        <span class="total">${data.total} matching</span>
      </div>
      <form class="filters" data-action="focus-filter">
        <input type="search" data-field="filter-keyword" placeholder="search keywords…" value="${esc(ui.keyword)}">
        ${sourceOptions}
        <input type="text" data-field="filter-languages" placeholder="languages (csv)" value="${esc(ui.languages.join(","))}">
        <input type="datetime-local" data-field="filter-from" value="${esc(ui.from)}">
        <input type="datetime-local" data-field="filter-to" value="${esc(ui.to)}">
        <button data-action="apply-filter">apply</button>
      </form>
      <ul class="focus-list">${rows || '<li class="empty">nothing matches</li>'}</ul>
    </div>`;
}

export function renderQueue(
  candidates: ReviewCandidate[],
  ui: { expanded: Set<string>; pending: Set<string>; notices: Map<string, string> },
): string {
  const rows = candidates
    .map((candidate) => {
      const controls = ui.pending.has(candidate.item_id)
        ? `<span class="pending">saving…</span>`
        : reviewControls(
            candidate.item_id,
            candidate.classification.label,
            candidate.allowed_relabels,
            ui.expanded.has(candidate.item_id),
            false,
          );
      const notice = ui.notices.get(candidate.item_id);
      return `
        <li class="queue-row" data-item-row="${esc(candidate.item_id)}">
          <span class="margin" title="margin">${candidate.classification.margin.toFixed(4)}</span>
          <span class="badge model uncertain">${esc(candidate.classification.label)}</span>
          <p class="text">${esc(candidate.excerpt)}</p>
          <div class="row-review">${controls}</div>
          ${notice ? `<div class="notice">${esc(notice)}</div>` : ""}
        </li>`;
    })
    .join("");
  return `
    <div class="panel queue" data-widget="queue">
      <div class="panel-head"><h2>Review queue</h2><span class="total">${candidates.length} uncertain</span></div>
      <ul class="queue-list">${rows || '<li class="empty">nothing to review 🎉</li>'}</ul>
    </div>`;
}

export function renderNav(active: string, health: { model_version: number | null } | null): string {
  const tab = (view: string, label: string) =>
    `<button class="tab ${active === view ? "active" : ""}" data-action="nav" data-view="${view}">${label}</button>`;
  return `
    <nav class="topnav" data-widget="nav">
      ${tab("dashboard", "Dashboard")}
      ${tab("focus_problems", "Problems")}
      ${tab("focus_inquiries", "Inquiries")}
      <span class="spacer"></span>
      <span class="model">model ${health?.model_version ?? "—"}</span>
      <button data-action="run-pipeline" title="crawl sources now">run pipeline</button>
    </nav>`;
}
