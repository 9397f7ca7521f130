/** UI-independent session controller.
 *
 * Holds the current session view and exposes the actions the page offers;
 * the DOM layer subscribes to state changes.  Keeping this free of DOM
 * access lets the vitest suite drive the full flow against a mocked API.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import type { SessionConfig, SessionView } from "./api.js";
import { validateRound } from "./validate.js";

export interface ControllerState {
  session: SessionView | null;
  banner: { kind: "idle" | "verdict" | "error"; text: string };
  busy: boolean;
}

export type Listener = (state: ControllerState) => void;

const BANNER_TEXT: Record<string, string> = {
  confirmed_winner: "Winner confirmed - the audit stops here.",
  hand_count: "Proceed to a full hand count.",
  continue: "No verdict yet - draw the next round.",
  exhausted: "Schedule exhausted without a verdict - proceed to a hand count.",
};

export class SessionController {
  private state: ControllerState = {
    session: null,
    banner: { kind: "idle", text: "" },
    busy: false,
  };
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  getState(): ControllerState {
    return this.state;
  }

  private update(patch: Partial<ControllerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async createSession(config: SessionConfig): Promise<void> {
    this.update({ busy: true });
    try {
      const session = await this.api.createSession(config);
      this.update({
        session,
        banner: { kind: "idle", text: "Session created - enter round counts." },
        busy: false,
      });
    } catch (err) {
      this.update({ banner: { kind: "error", text: describe(err) }, busy: false });
    }
  }

  /** Reload the session from the server, e.g. after a page refresh. */
  async loadSession(sessionId: string): Promise<void> {
    this.update({ busy: true });
    try {
      const session = await this.api.getSession(sessionId);
      const text = session.status === "active" ? "" : BANNER_TEXT[session.status] ?? "";
      this.update({
        session,
        banner: text ? { kind: "verdict", text } : { kind: "idle", text: "" },
        busy: false,
      });
    } catch (err) {
      this.update({ banner: { kind: "error", text: describe(err) }, busy: false });
    }
  }

  async submitRound(n: number, k: number): Promise<void> {
    const session = this.state.session;
    if (!session) return;
    const problem = validateRound(session, n, k);
    if (problem !== null) {
      this.update({ banner: { kind: "error", text: problem } });
      return;
    }
    this.update({ busy: true });
    try {
      const result = await this.api.submitRound(session.session_id, n, k, session.revision);
      const verdict = result.session.status === "exhausted" ? "exhausted" : result.verdict;
      this.update({
        session: result.session,
        banner: { kind: "verdict", text: BANNER_TEXT[verdict] ?? verdict },
        busy: false,
      });
    } catch (err) {
      if (err instanceof ApiRequestError && err.detail.status === 409) {
        // someone else advanced the session; re-sync and let the user retry
        await this.loadSession(session.session_id);
        this.update({
          banner: {
            kind: "error",
            text: "Session was updated elsewhere - counts reloaded, please re-check.",
          },
        });
        return;
      }
      this.update({ banner: { kind: "error", text: describe(err) }, busy: false });
    }
  }

  async downloadTrail(): Promise<Blob | null> {
    const session = this.state.session;
    if (!session) return null;
    return this.api.fetchTrail(session.session_id);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiRequestError) return err.message;
  if (err instanceof Error) return err.message;
  return String(err);
}
