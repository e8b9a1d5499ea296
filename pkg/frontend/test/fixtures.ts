import type {
  ClassificationPayload,
  FocusRecord,
  Label,
  ReviewCandidate,
} from "../src/types.js";

export function classification(
  label: Label,
  opts: { margin?: number; uncertain?: boolean; version?: number } = {},
): ClassificationPayload {
  const { margin = 0.05, uncertain = true, version = 1 } = opts;
  return {
    item_id: "app_store:x",
    label,
    probabilities: { problem_report: 0.4, inquiry: 0.35, irrelevant: 0.25 },
    margin,
    uncertain,
    model_version: version,
  };
}

export function focusRecord(
  id: string,
  opts: {
    label?: Label;
    uncertain?: boolean;
    labeled?: boolean;
    text?: string;
  } = {},
): FocusRecord {
  const { label = "problem_report", uncertain = true, labeled = false, text = "the app crashes" } = opts;
  const others = (["problem_report", "inquiry", "irrelevant"] as Label[]).filter((l) => l !== label);
  return {
    item: {
      id,
      source: "app_store",
      text,
      language: "en",
      created_at: "2019-03-01T10:00:00+00:00",
      rating: 1,
      author_ref: null,
      ingested_at: "2019-03-01T11:00:00+00:00",
    },
    classification: classification(label, { uncertain }),
    sentiment: { value: -0.9, polarity: "negative", hits: 1 },
    label_event: labeled
      ? {
          item_id: id,
          assigned_label: others[0],
          action: "relabel",
          prior_label: label,
          actor: "rev",
          decided_at: "2019-03-02T10:00:00+00:00",
          model_version_at_decision: 1,
        }
      : null,
    effective_label: labeled ? others[0] : label,
    review: {
      uncertain,
      labelable: uncertain && !labeled,
      allowed_relabels: uncertain && !labeled ? others : [],
    },
  };
}

export function candidate(id: string, label: Label = "problem_report", margin = 0.01): ReviewCandidate {
  const others = (["problem_report", "inquiry", "irrelevant"] as Label[]).filter((l) => l !== label);
  return {
    item_id: id,
    excerpt: "some uncertain feedback",
    classification: classification(label, { margin }),
    allowed_relabels: others,
  };
}

type Responder = (url: string, init?: RequestInit) => { status: number; body: unknown } | undefined;

export function mockFetch(responder: Responder) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    const result = responder(url, init);
    if (!result) throw new Error(`unmocked request: ${url}`);
    return new Response(JSON.stringify(result.body), {
      status: result.status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}
