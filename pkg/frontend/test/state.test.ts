import { describe, expect, it } from "vitest";

import {
  DEFAULT_STATE,
  stateFromQuery,
  stateToQuery,
  type ViewState,
} from "../src/state.js";

describe("URL round trip", () => {
  it("defaults serialize to an empty query", () => {
    expect(stateToQuery({ ...DEFAULT_STATE })).toBe("");
    expect(stateFromQuery("")).toEqual({ ...DEFAULT_STATE });
  });

  it("full state survives the round trip", () => {
    const state: ViewState = {
      view: "focus_problems",
      filter: {
        keyword: "crash report",
        sources: ["app_store", "microblog"],
        languages: ["en", "de"],
        from: "2019-03-01T00:00:00Z",
        to: "2019-04-01T00:00:00Z",
        relevantOnly: true,
      },
      trendWindow: "month",
      historyFrom: "2019-02-01T00:00:00Z",
      historyTo: "2019-04-01T00:00:00Z",
      historyBucket: "week",
    };
    expect(stateFromQuery(stateToQuery(state))).toEqual(state);
  });

  it("unknown values fall back to defaults", () => {
    const state = stateFromQuery("view=nonsense&window=decade&bucket=minute");
    expect(state.view).toBe("dashboard");
    expect(state.trendWindow).toBe("week");
    expect(state.historyBucket).toBe("day");
  });

  it("keyword with spaces and separators survives", () => {
    const state: ViewState = {
      ...DEFAULT_STATE,
      filter: { keyword: "dark mode & more?" },
    };
    expect(stateFromQuery(stateToQuery(state)).filter.keyword).toBe("dark mode & more?");
  });
});
