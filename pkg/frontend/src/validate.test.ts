import { describe, expect, it } from "vitest";

import { freshSession } from "./fixtures.js";
import { expectedVerdict, validateRound } from "./validate.js";

describe("validateRound", () => {
  it("accepts a well-formed first round", () => {
    expect(validateRound(freshSession(), 200, 109)).toBeNull();
  });

  it("rejects terminal sessions with the server's wording", () => {
    const s = freshSession({ status: "confirmed_winner" });
    expect(validateRound(s, 400, 213)).toBe("session is terminal (confirmed_winner)");
  });

  it("rejects the wrong round size", () => {
    expect(validateRound(freshSession(), 201, 100)).toBe(
      "expected round size 200, got 201",
    );
  });

  it("rejects k outside [0, n]", () => {
    expect(validateRound(freshSession(), 200, 201)).toBe(
      "require 0 <= k <= n, got k=201, n=200",
    );
    expect(validateRound(freshSession(), 200, -1)).toBe(
      "require 0 <= k <= n, got k=-1, n=200",
    );
  });

  it("rejects count regression", () => {
    const s = freshSession({
      rounds: [{ n: 200, k: 100, timestamp: "t", verdict: "continue" }],
    });
    expect(validateRound(s, 400, 99)).toBe("count regression: k fell from 100 to 99");
  });

  it("rejects increments larger than the round draw", () => {
    const s = freshSession({
      rounds: [{ n: 200, k: 100, timestamp: "t", verdict: "continue" }],
    });
    expect(validateRound(s, 400, 301)).toBe(
      "winner count increment exceeds ballots drawn this round",
    );
    expect(validateRound(s, 400, 300)).toBeNull();
  });
});

describe("expectedVerdict", () => {
  it("matches the lookup-table comparison", () => {
    const s = freshSession();
    expect(expectedVerdict(s, 200, 110)).toBe("confirmed_winner");
    expect(expectedVerdict(s, 200, 109)).toBe("continue");
    expect(expectedVerdict(s, 200, 91)).toBe("continue");
    expect(expectedVerdict(s, 200, 90)).toBe("hand_count");
  });
});
