/**
 * Typed client for the spamlab HTTP service. Every classification result the
 * UI shows comes through this module; the UI itself never computes a label,
 * score, or metric.
 */

export type FeatureDef =
  | { name: string; kind: "word_list"; words: string[] }
  | { name: string; kind: "substring"; pattern: string; case_sensitive: boolean }
  | { name: string; kind: "regex"; pattern: string }
  | { name: string; kind: "all_caps" }
  | { name: string; kind: "contains_dollar" }
  | { name: string; kind: "multi_punct"; min_count: number }
  | { name: string; kind: "bag_word"; word: string }
  | { name: string; kind: "caps_majority" };

export interface CorpusSummary {
  id: number;
  size: number;
  class_balance: number;
}

export interface FeatureSetSummary {
  id: number;
  feature_names: string[];
}

export interface ConfusionCounts {
  tp: number;
  fn: number;
  fp: number;
  tn: number;
}

export interface MetricsBlock {
  confusion: ConfusionCounts;
  accuracy: number;
  mcr: number;
  sensitivity: number | null;
  specificity: number | null;
}

export type ApiTreeNode =
  | { leaf: string; train_counts?: { spam: number; non_spam: number } }
  | { split: string; true: ApiTreeNode; false: ApiTreeNode };

export interface ModelResponse {
  id: number;
  kind: string;
  feature_names: string[];
  train_metrics: MetricsBlock;
  test_metrics: MetricsBlock;
  payload: Record<string, unknown>;
}

export interface ModelMetricsResponse {
  id: number;
  kind: string;
  train: MetricsBlock;
  test: MetricsBlock;
}

export interface PredictResponse {
  label: string;
  score: number;
  feature_vector: Record<string, boolean>;
}

export interface RuleParseResponse {
  ast: Record<string, unknown>;
  canonical: string;
}

export interface TrainRequestBody {
  kind: string;
  feature_set: number;
  train_corpus: number;
  test_corpus: number;
  seed: number;
  feature_names: string[];
  [extra: string]: unknown;
}

/** Error body shape produced by the service: stable machine code + message. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly position?: number;
  readonly detail?: Record<string, unknown>;

  constructor(status: number, body: Record<string, unknown>) {
    super(typeof body.message === "string" ? body.message : `HTTP ${status}`);
    this.status = status;
    this.code = typeof body.code === "string" ? body.code : "unknown";
    if (typeof body.position === "number") this.position = body.position;
    if (body.detail && typeof body.detail === "object") {
      this.detail = body.detail as Record<string, unknown>;
    }
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, { code: "unreachable", message: "service unreachable" });
    }
    const text = await response.text();
    let parsed: unknown = null;
    if (text) {
      try {
        parsed = JSON.parse(text);
      } catch {
        parsed = { message: text };
      }
    }
    if (!response.ok) {
      throw new ApiError(response.status, (parsed ?? {}) as Record<string, unknown>);
    }
    return parsed as T;
  }

  uploadCorpus(csv: string, name?: string): Promise<CorpusSummary> {
    return this.request("POST", "/corpora", name === undefined ? { csv } : { csv, name });
  }

  createFeatureSet(features: FeatureDef[]): Promise<FeatureSetSummary> {
    return this.request("POST", "/feature-sets", features);
  }

  parseRule(source: string): Promise<RuleParseResponse> {
    return this.request("POST", "/rules/parse", { source });
  }

  trainModel(body: TrainRequestBody): Promise<ModelResponse> {
    return this.request("POST", "/models", body);
  }

  modelMetrics(modelId: number): Promise<ModelMetricsResponse> {
    return this.request("GET", `/models/${modelId}/metrics`);
  }

  predict(modelId: number, subject: string): Promise<PredictResponse> {
    return this.request("POST", `/models/${modelId}/predict`, { subject });
  }

  health(): Promise<unknown> {
    return this.request("GET", "/healthz");
  }
}
