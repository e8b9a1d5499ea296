import type {
  FocusResponse,
  HealthResponse,
  HeatmapResponse,
  HistoryResponse,
  Label,
  LabelResponse,
  QueueResponse,
  TrendsResponse,
} from "./types.js";
import { filterToParams, type FocusFilter } from "./state.js";

export interface RuntimeConfig {
  apiBase: string;
  authToken?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private config: RuntimeConfig,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string, params?: URLSearchParams): string {
    const query = params && [...params.keys()].length ? `?${params.toString()}` : "";
    return `${this.config.apiBase}/api/v1${path}${query}`;
  }

  private async handle<T>(response: Response): Promise<T> {
    const body = await response.json().catch(() => null);
    if (!response.ok && !(response.status === 207 && body)) {
      const code = body?.code ?? "INTERNAL";
      const message = body?.message ?? `HTTP ${response.status}`;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  private async get<T>(path: string, params?: URLSearchParams): Promise<T> {
    return this.handle<T>(await this.fetchFn(this.url(path, params)));
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.config.authToken) headers["Authorization"] = `Bearer ${this.config.authToken}`;
    return this.handle<T>(
      await this.fetchFn(this.url(path), {
        method: "POST",
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      }),
    );
  }

  heatmap(filter: FocusFilter): Promise<HeatmapResponse> {
    return this.get("/dashboard/heatmap", filterToParams(filter));
  }

  trends(window: string, filter: FocusFilter): Promise<TrendsResponse> {
    const params = filterToParams(filter);
    params.set("window", window);
    return this.get("/dashboard/trends", params);
  }

  history(from: string, to: string, bucket: string, filter: FocusFilter): Promise<HistoryResponse> {
    const params = filterToParams(filter);
    params.set("from", from);
    params.set("to", to);
    params.set("bucket", bucket);
    return this.get("/dashboard/history", params);
  }

  focus(kind: "problems" | "inquiries", filter: FocusFilter, offset = 0, limit = 50): Promise<FocusResponse> {
    const params = filterToParams(filter);
    params.delete("relevant_only"); // the view itself fixes the label
    params.set("offset", String(offset));
    params.set("limit", String(limit));
    return this.get(`/focus/${kind}`, params);
  }

  queue(limit?: number): Promise<QueueResponse> {
    const params = new URLSearchParams();
    if (limit !== undefined) params.set("limit", String(limit));
    return this.get("/review/queue", params);
  }

  label(itemId: string, label: Label, actor: string): Promise<LabelResponse> {
    return this.post(`/feedback/${encodeURIComponent(itemId)}/label`, { label, actor });
  }

  runPipeline(): Promise<unknown> {
    return this.post("/pipeline/run");
  }

  health(): Promise<HealthResponse> {
    return this.get("/health");
  }
}
