// Payload shapes of the /api/v1 endpoints (see ../docs/API.md).

export type Label = "problem_report" | "inquiry" | "irrelevant";

export interface HeatmapResponse {
  cells: number[][]; // 7 weekday rows x 24 hour columns
  total: number;
}

export interface TrendsResponse {
  window: "day" | "week" | "month";
  problem_count: number;
  inquiry_count: number;
  avg_sentiment: number | null;
  deltas: {
    problems: number;
    inquiries: number;
    sentiment: number | null;
  };
}

export interface HistoryPoint {
  bucket_start: string;
  problem_count: number;
  inquiry_count: number;
  irrelevant_count: number;
  avg_sentiment: number | null;
}

export interface HistoryResponse {
  bucket: "hour" | "day" | "week";
  points: HistoryPoint[];
}

export interface ItemPayload {
  id: string;
  source: string;
  text: string;
  language: string;
  created_at: string;
  rating: number | null;
  author_ref: string | null;
  ingested_at: string;
}

export interface ClassificationPayload {
  item_id: string;
  label: Label;
  probabilities: Record<Label, number>;
  margin: number;
  uncertain: boolean;
  model_version: number;
}

export interface SentimentPayload {
  value: number;
  polarity: "negative" | "neutral" | "positive";
  hits: number;
}

export interface LabelEventPayload {
  item_id: string;
  assigned_label: Label;
  action: "agree" | "relabel";
  prior_label: Label;
  actor: string;
  decided_at: string;
  model_version_at_decision: number;
}

export interface FocusRecord {
  item: ItemPayload;
  classification: ClassificationPayload | null;
  sentiment: SentimentPayload | null;
  label_event: LabelEventPayload | null;
  effective_label: Label | null;
  review: {
    uncertain: boolean;
    labelable: boolean;
    allowed_relabels: Label[];
  };
}

export interface FocusResponse {
  total: number;
  offset: number;
  limit: number;
  items: FocusRecord[];
}

export interface ReviewCandidate {
  item_id: string;
  excerpt: string;
  classification: ClassificationPayload;
  allowed_relabels: Label[];
}

export interface QueueResponse {
  candidates: ReviewCandidate[];
}

export interface LabelResponse extends LabelEventPayload {
  retrained: boolean;
  new_model_version: number | null;
}

export interface HealthResponse {
  status: string;
  model_version: number | null;
  last_run_at: string | null;
  items: number;
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}
