import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiRequestError } from "./api.js";
import { FakeServer } from "./fixtures.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("creates a session against /v1/sessions", async () => {
    const server = new FakeServer();
    vi.stubGlobal("fetch", server.fetch);
    const client = new ApiClient("");
    const session = await client.createSession({
      N: 100000,
      rule: { kind: "bayes" },
      schedule: [200, 400, 800],
      winner_name: "Alice",
      loser_name: "Bob",
    });
    expect(session.session_id).toBe("fixture-session");
    expect(session.revision).toBe(0);
  });

  it("raises a typed error on revision conflicts", async () => {
    const server = new FakeServer();
    vi.stubGlobal("fetch", server.fetch);
    const client = new ApiClient("");
    await client.submitRound("fixture-session", 200, 109, 0);
    const attempt = client.submitRound("fixture-session", 400, 213, 0);
    await expect(attempt).rejects.toBeInstanceOf(ApiRequestError);
    await attempt.catch((err: ApiRequestError) => {
      expect(err.detail.status).toBe(409);
      expect(err.detail.code).toBe("revision_conflict");
    });
  });

  it("raises on unknown routes with the body's message", async () => {
    const server = new FakeServer();
    vi.stubGlobal("fetch", server.fetch);
    const client = new ApiClient("");
    await expect(client.getSession("x/extra")).resolves.toBeTruthy();
    vi.stubGlobal(
      "fetch",
      async () => new Response("not json", { status: 500 }),
    );
    await expect(client.getSession("y")).rejects.toThrow("HTTP 500");
  });
});
