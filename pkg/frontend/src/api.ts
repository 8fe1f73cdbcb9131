// Thin fetch wrapper over the geotutor HTTP API. Every method returns the
// server's JSON payload unchanged; interpretation happens elsewhere.

import type {
  ApiErrorBody,
  HintResponse,
  ProblemSummary,
  RedactionView,
  SessionState,
  SubmitResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  // baseUrl is "" when the app is served by the service itself under /app/.
  constructor(baseUrl = "", fetchFn: FetchLike = (u, i) => fetch(u, i)) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let body: ApiErrorBody;
      try {
        body = (await resp.json()) as ApiErrorBody;
      } catch {
        body = { code: "httpError", message: `HTTP ${resp.status}`, detail: null };
      }
      throw new ApiError(resp.status, body);
    }
    return (await resp.json()) as T;
  }

  listProblems(): Promise<ProblemSummary[]> {
    return this.request<ProblemSummary[]>("/problems");
  }

  graphUrl(problemId: string, format: "json" | "dot"): string {
    return `${this.base}/problems/${encodeURIComponent(problemId)}/graph?format=${format}`;
  }

  createSession(problemId: string): Promise<SessionState> {
    return this.request<SessionState>("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ problemId }),
    });
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.request<SessionState>(`/sessions/${sessionId}`);
  }

  submitStatement(sessionId: string, text: string): Promise<SubmitResponse> {
    return this.request<SubmitResponse>(`/sessions/${sessionId}/statements`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  getRedaction(sessionId: string): Promise<RedactionView> {
    return this.request<RedactionView>(`/sessions/${sessionId}/redaction`);
  }

  getHint(sessionId: string): Promise<HintResponse> {
    return this.request<HintResponse>(`/sessions/${sessionId}/hint`);
  }

  async getLog(sessionId: string): Promise<string> {
    const resp = await this.fetchFn(`${this.base}/sessions/${sessionId}/log`);
    if (!resp.ok) {
      throw new ApiError(resp.status, {
        code: "httpError",
        message: `HTTP ${resp.status}`,
        detail: null,
      });
    }
    return resp.text();
  }
}
