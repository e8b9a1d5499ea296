// Controller: owns the view state, fetch sequencing, and the labeling flow.
// Rendered HTML is kept per widget (tests read it directly); when a root
// element is attached the same HTML is mounted into the page. Concurrent
// fetches per widget are guarded by a sequence number: responses arriving
// after a newer request started are discarded (last write wins).

import { ApiClient, ApiError } from "./api.js";
import {
  DEFAULT_STATE,
  stateFromQuery,
  stateToQuery,
  type FocusFilter,
  type ViewState,
} from "./state.js";
import {
  renderFocusView,
  renderHeatmap,
  renderHistoryChart,
  renderNav,
  renderQueue,
  renderTrendCards,
} from "./render.js";
import type { FocusRecord, Label, QueueResponse, ReviewCandidate } from "./types.js";

type Widget = "nav" | "heatmap" | "trends" | "history" | "focus" | "queue";

export class App {
  state: ViewState;
  html: Partial<Record<Widget, string>> = {};
  expanded = new Set<string>();
  pending = new Set<string>();
  notices = new Map<string, string>();
  lastQueue: ReviewCandidate[] = [];
  lastFocus: FocusRecord[] = [];
  lastFocusTotal = 0;
  actor = "dashboard-user";

  private seq: Record<string, number> = {};
  private root: { querySelector(sel: string): { innerHTML: string } | null } | null;
  private onUrlChange: ((query: string) => void) | null;
  private modelVersion: number | null = null;

  constructor(
    private api: ApiClient,
    options: {
      root?: { querySelector(sel: string): { innerHTML: string } | null } | null;
      onUrlChange?: (query: string) => void;
      initialQuery?: string;
    } = {},
  ) {
    this.root = options.root ?? null;
    this.onUrlChange = options.onUrlChange ?? null;
    this.state = options.initialQuery ? stateFromQuery(options.initialQuery) : { ...DEFAULT_STATE };
  }

  private nextSeq(widget: string): number {
    this.seq[widget] = (this.seq[widget] ?? 0) + 1;
    return this.seq[widget];
  }

  private isStale(widget: string, mySeq: number): boolean {
    return this.seq[widget] !== mySeq;
  }

  private mount(widget: Widget, html: string): void {
    this.html[widget] = html;
    const slot = this.root?.querySelector(`[data-slot="${widget}"]`);
    if (slot) slot.innerHTML = html;
  }

  private pushUrl(): void {
    this.onUrlChange?.(stateToQuery(this.state));
  }

  // -- data refreshes -----------------------------------------------------

  async refreshNav(): Promise<void> {
    const mySeq = this.nextSeq("nav");
    try {
      const health = await this.api.health();
      if (this.isStale("nav", mySeq)) return;
      this.modelVersion = health.model_version;
    } catch {
      this.modelVersion = null;
    }
    this.mount("nav", renderNav(this.state.view, { model_version: this.modelVersion }));
  }

  async refreshHeatmap(): Promise<void> {
    const mySeq = this.nextSeq("heatmap");
    const data = await this.api.heatmap(this.state.filter);
    if (this.isStale("heatmap", mySeq)) return;
    this.mount("heatmap", renderHeatmap(data, Boolean(this.state.filter.relevantOnly)));
  }

  async refreshTrends(): Promise<void> {
    const mySeq = this.nextSeq("trends");
    const data = await this.api.trends(this.state.trendWindow, this.state.filter);
    if (this.isStale("trends", mySeq)) return;
    this.mount("trends", renderTrendCards(data));
  }

  async refreshHistory(): Promise<void> {
    if (!this.state.historyFrom || !this.state.historyTo) {
      this.mount(
        "history",
        renderHistoryChart({ bucket: this.state.historyBucket, points: [] }, {}),
      );
      return;
    }
    const mySeq = this.nextSeq("history");
    const data = await this.api.history(
      this.state.historyFrom,
      this.state.historyTo,
      this.state.historyBucket,
      this.state.filter,
    );
    if (this.isStale("history", mySeq)) return;
    this.mount(
      "history",
      renderHistoryChart(data, { from: this.state.historyFrom, to: this.state.historyTo }),
    );
  }

  async refreshFocus(): Promise<void> {
    const kind = this.state.view === "focus_inquiries" ? "inquiries" : "problems";
    const mySeq = this.nextSeq("focus");
    const data = await this.api.focus(kind, this.state.filter);
    if (this.isStale("focus", mySeq)) return;
    this.lastFocus = data.items;
    this.lastFocusTotal = data.total;
    this.mount("focus", this.renderFocus(kind, data.total));
  }

  private renderFocus(kind: "problems" | "inquiries", total: number): string {
    return renderFocusView(
      kind,
      { total, items: this.lastFocus },
      {
        keyword: this.state.filter.keyword ?? "",
        sources: this.state.filter.sources ?? [],
        languages: this.state.filter.languages ?? [],
        from: this.state.filter.from ?? "",
        to: this.state.filter.to ?? "",
        expanded: this.expanded,
        pending: this.pending,
        notices: this.notices,
      },
    );
  }

  async refreshQueue(limit?: number): Promise<void> {
    const mySeq = this.nextSeq("queue");
    let data: QueueResponse;
    try {
      data = await this.api.queue(limit);
    } catch (error) {
      if (error instanceof ApiError && error.code === "UNTRAINED_MODEL") {
        if (this.isStale("queue", mySeq)) return;
        this.lastQueue = [];
        this.mount(
          "queue",
          `<div class="panel queue" data-widget="queue"><div class="notice">${error.message}</div></div>`,
        );
        return;
      }
      throw error;
    }
    if (this.isStale("queue", mySeq)) return;
    this.lastQueue = data.candidates;
    this.mount("queue", renderQueue(this.lastQueue, this.uiState()));
  }

  private uiState() {
    return { expanded: this.expanded, pending: this.pending, notices: this.notices };
  }

  async refreshView(): Promise<void> {
    await this.refreshNav();
    if (this.state.view === "dashboard") {
      await Promise.all([this.refreshHeatmap(), this.refreshTrends(), this.refreshHistory()]);
    } else {
      await Promise.all([this.refreshFocus(), this.refreshQueue()]);
    }
  }

  // -- user actions ---------------------------------------------------------

  async navigate(view: ViewState["view"]): Promise<void> {
    this.state.view = view;
    this.pushUrl();
    await this.refreshView();
  }

  async setRelevantOnly(on: boolean): Promise<void> {
    this.state.filter.relevantOnly = on || undefined;
    this.pushUrl();
    await Promise.all([this.refreshHeatmap(), this.refreshTrends(), this.refreshHistory()]);
  }

  async setTrendWindow(window: ViewState["trendWindow"]): Promise<void> {
    this.state.trendWindow = window;
    this.pushUrl();
    await this.refreshTrends();
  }

  async setHistoryRange(from: string, to: string, bucket: ViewState["historyBucket"]): Promise<void> {
    this.state.historyFrom = from;
    this.state.historyTo = to;
    this.state.historyBucket = bucket;
    this.pushUrl();
    await this.refreshHistory();
  }

  async applyFilter(filter: FocusFilter): Promise<void> {
    this.state.filter = filter;
    this.pushUrl();
    await this.refreshView();
  }

  toggleDisagree(itemId: string): void {
    if (this.expanded.has(itemId)) this.expanded.delete(itemId);
    else this.expanded.add(itemId);
    this.remountLists();
  }

  private remountLists(): void {
    if (this.html.queue !== undefined) {
      this.mount("queue", renderQueue(this.lastQueue, this.uiState()));
    }
    if (this.html.focus !== undefined) {
      const kind = this.state.view === "focus_inquiries" ? "inquiries" : "problems";
      this.mount("focus", this.renderFocus(kind, this.lastFocusTotal));
    }
  }

  async submitLabel(itemId: string, label: Label): Promise<void> {
    this.pending.add(itemId);
    this.notices.delete(itemId);
    this.remountLists();
    try {
      await this.api.label(itemId, label, this.actor);
      // optimistic removal: the item can never be labeled again
      this.lastQueue = this.lastQueue.filter((c) => c.item_id !== itemId);
      this.expanded.delete(itemId);
      this.pending.delete(itemId);
      this.remountLists();
      // the row's affordance must disappear; refetch to stay honest
      if (this.state.view !== "dashboard") await this.refreshFocus();
      await this.refreshNav(); // a batch retrain may have bumped the model version
    } catch (error) {
      this.pending.delete(itemId);
      if (error instanceof ApiError && (error.code === "NOT_UNCERTAIN" || error.code === "ALREADY_LABELED")) {
        this.notices.set(itemId, `${error.code}: ${error.message}`);
        this.remountLists();
        // refresh the stale row from the server
        if (this.state.view !== "dashboard") await this.refreshFocus();
        await this.refreshQueue();
        return;
      }
      this.notices.set(itemId, error instanceof Error ? error.message : String(error));
      this.remountLists();
    }
  }

  async runPipeline(): Promise<void> {
    await this.api.runPipeline();
    await this.refreshView();
  }
}
