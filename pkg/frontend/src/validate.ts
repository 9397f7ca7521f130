/** Client-side round validation.
 *
 * Mirrors the server's session invariants word for word so the user sees the
 * same message either way; the server remains authoritative.
 */

import type { SessionView } from "./api.js";

export function validateRound(
  session: SessionView,
  cumulativeN: number,
  cumulativeK: number,
): string | null {
  if (session.status !== "active") {
    return `session is terminal (${session.status})`;
  }
  const schedule = session.table.schedule;
  const idx = session.rounds.length;
  const expected = schedule[idx];
  if (expected === undefined) {
    return "schedule is exhausted";
  }
  if (cumulativeN !== expected) {
    return `expected round size ${expected}, got ${cumulativeN}`;
  }
  if (!Number.isInteger(cumulativeK) || cumulativeK < 0 || cumulativeK > cumulativeN) {
    return `require 0 <= k <= n, got k=${cumulativeK}, n=${cumulativeN}`;
  }
  const last = session.rounds[session.rounds.length - 1];
  const prevN = last ? last.n : 0;
  const prevK = last ? last.k : 0;
  if (cumulativeK < prevK) {
    return `count regression: k fell from ${prevK} to ${cumulativeK}`;
  }
  if (cumulativeK - prevK > cumulativeN - prevN) {
    return "winner count increment exceeds ballots drawn this round";
  }
  return null;
}

/** The verdict the lookup table implies; used to preview before submitting. */
export function expectedVerdict(
  session: SessionView,
  n: number,
  k: number,
): "confirmed_winner" | "hand_count" | "continue" {
  const row = session.table.rows.find((r) => r.n === n);
  if (!row) return "continue";
  if (row.k_plus !== null && k >= row.k_plus) return "confirmed_winner";
  if (row.k_minus !== null && k <= row.k_minus) return "hand_count";
  return "continue";
}
