/** Typed client for the /v1 HTTP API. */

export interface TableRow {
  n: number;
  k_plus: number | null;
  k_minus: number | null;
}

export interface TableView {
  rule: Record<string, unknown>;
  N: number | null;
  schedule: number[];
  rows: TableRow[];
}

export interface RoundView {
  n: number;
  k: number;
  timestamp: string;
  verdict: string;
}

export interface SessionView {
  schema_version: number;
  session_id: string;
  N: number;
  winner_name: string;
  loser_name: string;
  table: TableView;
  rounds: RoundView[];
  status: string;
  revision: number;
  created_at: string;
}

export interface SessionConfig {
  N: number;
  rule: Record<string, unknown>;
  schedule: number[];
  winner_name: string;
  loser_name: string;
}

export interface ApiError {
  status: number;
  code: string;
  message: string;
}

export class ApiRequestError extends Error {
  readonly detail: ApiError;

  constructor(detail: ApiError) {
    super(`${detail.code}: ${detail.message}`);
    this.detail = detail;
  }
}

async function reject(response: Response): Promise<never> {
  let code = "unknown_error";
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (typeof body.code === "string") code = body.code;
    if (typeof body.message === "string") message = body.message;
  } catch {
    // non-JSON error body; keep the defaults
  }
  throw new ApiRequestError({ status: response.status, code, message });
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await reject(response);
    return (await response.json()) as T;
  }

  async createSession(config: SessionConfig): Promise<SessionView> {
    return this.postJson<SessionView>("/v1/sessions", config);
  }

  async getSession(sessionId: string): Promise<SessionView> {
    const response = await fetch(`${this.baseUrl}/v1/sessions/${sessionId}`);
    if (!response.ok) await reject(response);
    return (await response.json()) as SessionView;
  }

  async submitRound(
    sessionId: string,
    n: number,
    k: number,
    revision: number,
  ): Promise<{ verdict: string; session: SessionView }> {
    return this.postJson(`/v1/sessions/${sessionId}/rounds`, { n, k, revision });
  }

  async fetchTrail(sessionId: string): Promise<Blob> {
    const response = await fetch(`${this.baseUrl}/v1/sessions/${sessionId}/trail`);
    if (!response.ok) await reject(response);
    return response.blob();
  }
}
