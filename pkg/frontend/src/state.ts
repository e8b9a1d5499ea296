// View state and its round trip through the URL query string, so any
// filtered view is shareable as a link.

export type ViewName = "dashboard" | "focus_problems" | "focus_inquiries";

export interface FocusFilter {
  keyword?: string;
  sources?: string[];
  languages?: string[];
  from?: string;
  to?: string;
  relevantOnly?: boolean;
}

export interface ViewState {
  view: ViewName;
  filter: FocusFilter;
  trendWindow: "day" | "week" | "month";
  historyFrom?: string;
  historyTo?: string;
  historyBucket: "hour" | "day" | "week";
}

export const DEFAULT_STATE: ViewState = {
  view: "dashboard",
  filter: {},
  trendWindow: "week",
  historyBucket: "day",
};

const VIEWS: ViewName[] = ["dashboard", "focus_problems", "focus_inquiries"];
const WINDOWS = ["day", "week", "month"] as const;
const BUCKETS = ["hour", "day", "week"] as const;

export function filterToParams(filter: FocusFilter): URLSearchParams {
  const params = new URLSearchParams();
  if (filter.keyword) params.set("keyword", filter.keyword);
  if (filter.sources?.length) params.set("sources", filter.sources.join(","));
  if (filter.languages?.length) params.set("languages", filter.languages.join(","));
  if (filter.from) params.set("from", filter.from);
  if (filter.to) params.set("to", filter.to);
  if (filter.relevantOnly) params.set("relevant_only", "true");
  return params;
}

export function stateToQuery(state: ViewState): string {
  const params = filterToParams(state.filter);
  if (state.view !== "dashboard") params.set("view", state.view);
  if (state.trendWindow !== "week") params.set("window", state.trendWindow);
  if (state.historyFrom) params.set("hfrom", state.historyFrom);
  if (state.historyTo) params.set("hto", state.historyTo);
  if (state.historyBucket !== "day") params.set("bucket", state.historyBucket);
  return params.toString();
}

export function stateFromQuery(query: string): ViewState {
  const params = new URLSearchParams(query);
  const filter: FocusFilter = {};
  const keyword = params.get("keyword");
  if (keyword) filter.keyword = keyword;
  const sources = params.get("sources");
  if (sources) filter.sources = sources.split(",").filter(Boolean);
  const languages = params.get("languages");
  if (languages) filter.languages = languages.split(",").filter(Boolean);
  const from = params.get("from");
  if (from) filter.from = from;
  const to = params.get("to");
  if (to) filter.to = to;
  if (params.get("relevant_only") === "true") filter.relevantOnly = true;

  const view = params.get("view") as ViewName | null;
  const trendWindow = params.get("window") as (typeof WINDOWS)[number] | null;
  const bucket = params.get("bucket") as (typeof BUCKETS)[number] | null;
  return {
    view: view && VIEWS.includes(view) ? view : "dashboard",
    filter,
    trendWindow: trendWindow && WINDOWS.includes(trendWindow) ? trendWindow : "week",
    historyFrom: params.get("hfrom") ?? undefined,
    historyTo: params.get("hto") ?? undefined,
    historyBucket: bucket && BUCKETS.includes(bucket) ? bucket : "day",
  };
}
