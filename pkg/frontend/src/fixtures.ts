/** Shared test fixtures.
 *
 * Threshold values were produced by the core engine for a Bayesian audit
 * with error bound 0.1, beta(1/2,1/2) prior, N=100,000: the first three
 * doubling rounds give (k+, k-) of (110, 90), (213, 187), (419, 381).
 */

import type { SessionView, TableView } from "./api.js";

export const REFERENCE_TABLE: TableView = {
  rule: {
    kind: "bayes",
    gamma: 0.1,
    prior: { N: 100000, family: "beta", params: { a: 0.5, b: 0.5 } },
  },
  N: 100000,
  schedule: [200, 400, 800],
  rows: [
    { n: 200, k_plus: 110, k_minus: 90 },
    { n: 400, k_plus: 213, k_minus: 187 },
    { n: 800, k_plus: 419, k_minus: 381 },
  ],
};

export function freshSession(overrides: Partial<SessionView> = {}): SessionView {
  return {
    schema_version: 1,
    session_id: "fixture-session",
    N: 100000,
    winner_name: "Alice",
    loser_name: "Bob",
    table: REFERENCE_TABLE,
    rounds: [],
    status: "active",
    revision: 0,
    created_at: "2026-08-25T00:00:00+00:00",
    ...overrides,
  };
}

/** Minimal in-memory stand-in for the /v1 API, with the same verdict rule. */
export class FakeServer {
  session: SessionView = freshSession();

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? "GET";
    if (method === "POST" && url.endsWith("/v1/sessions")) {
      this.session = freshSession();
      return json(201, this.session);
    }
    if (method === "GET" && url.includes("/v1/sessions/") && url.endsWith("/trail")) {
      return json(200, { trail: { session_id: this.session.session_id }, content_hash: "x" });
    }
    if (method === "GET" && url.includes("/v1/sessions/")) {
      return json(200, this.session);
    }
    if (method === "POST" && url.endsWith("/rounds")) {
      const body = JSON.parse(String(init?.body)) as { n: number; k: number; revision: number };
      if (body.revision !== this.session.revision) {
        return json(409, {
          code: "revision_conflict",
          message: `stale revision; current is ${this.session.revision}`,
        });
      }
      const row = this.session.table.rows.find((r) => r.n === body.n);
      if (!row) {
        return json(422, { code: "invariant_violation", message: "bad round size" });
      }
      let verdict = "continue";
      if (row.k_plus !== null && body.k >= row.k_plus) verdict = "confirmed_winner";
      else if (row.k_minus !== null && body.k <= row.k_minus) verdict = "hand_count";
      const status =
        verdict === "confirmed_winner"
          ? "confirmed_winner"
          : verdict === "hand_count"
            ? "hand_count"
            : body.n === this.session.table.schedule[this.session.table.schedule.length - 1]
              ? "exhausted"
              : "active";
      this.session = {
        ...this.session,
        rounds: [
          ...this.session.rounds,
          { n: body.n, k: body.k, timestamp: "2026-08-25T00:01:00+00:00", verdict },
        ],
        status,
        revision: this.session.revision + 1,
      };
      return json(200, { verdict, session: this.session });
    }
    return json(404, { code: "unknown", message: `no route ${method} ${url}` });
  };
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
