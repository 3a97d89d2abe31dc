import type {
  ActionKind,
  ApiErrorBody,
  ForecastDetail,
  ForecastRow,
  ListFilters,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(public readonly body: ApiErrorBody) {
    super(body.message);
  }

  get status(): number {
    return this.body.status;
  }

  get code(): string {
    return this.body.code;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the documented endpoints — one method per call,
 * no caching, no derived values. */
export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async listForecasts(filters: ListFilters = {}): Promise<ForecastRow[]> {
    const params = new URLSearchParams();
    for (const key of ["material", "client", "from", "to"] as const) {
      const value = filters[key];
      if (value) params.set(key, value);
    }
    const query = params.toString();
    return this.request("GET", `/forecasts${query ? `?${query}` : ""}`);
  }

  async getForecast(nodeId: string): Promise<ForecastDetail> {
    return this.request("GET", `/forecasts/${encodeURIComponent(nodeId)}`);
  }

  async submitFeedback(
    user: string,
    targetId: string,
    rating: number,
    comment: string,
  ): Promise<{ feedback_id: string }> {
    return this.request("POST", "/feedback", {
      user,
      target_id: targetId,
      rating,
      comment,
    });
  }

  async submitAction(
    user: string,
    optionId: string,
    kind: ActionKind,
  ): Promise<{ action_id: string }> {
    return this.request("POST", "/actions", { user, option_id: optionId, kind });
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.base}${path}`, init);
    const text = await response.text();
    if (!response.ok) {
      throw new ApiRequestError(parseErrorBody(text, response.status));
    }
    return JSON.parse(text) as T;
  }
}

function parseErrorBody(text: string, status: number): ApiErrorBody {
  try {
    const parsed = JSON.parse(text);
    if (
      parsed &&
      typeof parsed.code === "string" &&
      typeof parsed.message === "string"
    ) {
      return { status, code: parsed.code, message: parsed.message };
    }
  } catch {
    // fall through to the generic body
  }
  return { status, code: "invalid_argument", message: text || `HTTP ${status}` };
}
