import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { mockFetch } from "./fixtures.js";

describe("ApiClient", () => {
  it("builds filter query strings", async () => {
    const { fetchFn, calls } = mockFetch(() => ({ status: 200, body: { cells: [], total: 0 } }));
    const api = new ApiClient({ apiBase: "http://x" }, fetchFn);
    await api.heatmap({
      keyword: "crash",
      sources: ["app_store"],
      from: "2019-03-01T00:00:00Z",
      relevantOnly: true,
    });
    const url = calls[0].url;
    expect(url).toContain("http://x/api/v1/dashboard/heatmap?");
    expect(url).toContain("keyword=crash");
    expect(url).toContain("sources=app_store");
    expect(url).toContain("relevant_only=true");
  });

  it("sends the bearer token on mutations only", async () => {
    const { fetchFn, calls } = mockFetch((url) => {
      if (url.includes("/label")) {
        return { status: 200, body: {} };
      }
      return { status: 200, body: { candidates: [] } };
    });
    const api = new ApiClient({ apiBase: "", authToken: "tok" }, fetchFn);
    await api.queue();
    await api.label("a", "inquiry", "me");
    const headers = (calls[1].init?.headers ?? {}) as Record<string, string>;
    expect(headers["Authorization"]).toBe("Bearer tok");
    expect(calls[0].init).toBeUndefined();
  });

  it("throws a typed error with the server code", async () => {
    const { fetchFn } = mockFetch(() => ({
      status: 409,
      body: { status: 409, code: "NOT_UNCERTAIN", message: "nope" },
    }));
    const api = new ApiClient({ apiBase: "" }, fetchFn);
    const error = await api.label("a", "inquiry", "me").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(409);
    expect(error.code).toBe("NOT_UNCERTAIN");
  });

  it("escapes item ids in label paths", async () => {
    const { fetchFn, calls } = mockFetch(() => ({ status: 200, body: {} }));
    const api = new ApiClient({ apiBase: "" }, fetchFn);
    await api.label("app_store:r/1", "inquiry", "me");
    expect(calls[0].url).toContain("/feedback/app_store%3Ar%2F1/label");
  });
});
