import { describe, expect, it } from "vitest";

import { renderChart } from "./chart.js";
import { REFERENCE_TABLE } from "./fixtures.js";

describe("renderChart", () => {
  it("renders threshold polylines and axes", () => {
    const svg = renderChart(REFERENCE_TABLE.rows, []);
    expect(svg).toContain("<svg");
    expect(svg).toContain('class="kplus"');
    expect(svg).toContain('class="kminus"');
    expect(svg).toContain('class="axis"');
  });

  it("overlays the entered trajectory", () => {
    const svg = renderChart(REFERENCE_TABLE.rows, [
      { n: 200, k: 100, timestamp: "t", verdict: "continue" },
      { n: 400, k: 213, timestamp: "t", verdict: "confirmed_winner" },
    ]);
    expect(svg).toContain('class="trajectory"');
    expect((svg.match(/class="entered"/g) ?? []).length).toBe(2);
  });

  it("omits the k- series when absent", () => {
    const rows = REFERENCE_TABLE.rows.map((r) => ({ ...r, k_minus: null }));
    const svg = renderChart(rows, []);
    expect(svg).toContain('class="kplus"');
    expect(svg).not.toContain('class="kminus"');
  });

  it("keeps coordinates inside the viewBox", () => {
    const svg = renderChart(REFERENCE_TABLE.rows, [
      { n: 800, k: 800, timestamp: "t", verdict: "continue" },
    ]);
    const coords = [...svg.matchAll(/points="([^"]+)"/g)]
      .flatMap((m) => (m[1] ?? "").split(" "))
      .flatMap((p) => p.split(",").map(Number));
    for (const c of coords) {
      expect(c).toBeGreaterThanOrEqual(0);
      expect(c).toBeLessThanOrEqual(640);
    }
  });
});
