/** DOM wiring for the single-page audit console. */

import { ApiClient } from "./api.js";
import { renderChart } from "./chart.js";
import { SessionController } from "./controller.js";
import type { ControllerState } from "./controller.js";
import type { SessionView } from "./api.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function parseSchedule(text: string): number[] {
  return text
    .split(",")
    .map((part) => part.trim())
    .filter(Boolean)
    .map((part) => {
      const v = Number(part);
      if (!Number.isInteger(v) || v <= 0) throw new Error(`bad round size: ${part}`);
      return v;
    });
}

function buildRule(form: {
  family: string;
  gamma: number;
  N: number;
  prior: string;
}): Record<string, unknown> {
  const priorSpec =
    form.prior === "beta"
      ? { N: form.N, family: "beta", params: { a: 0.5, b: 0.5 } }
      : { N: form.N, family: form.prior, params: {} };
  if (form.family === "bayes_rla") {
    return { kind: "bayes_rla", alpha: form.gamma, prior: priorSpec };
  }
  return { kind: "bayes", gamma: form.gamma, prior: priorSpec };
}

function renderTable(session: SessionView): string {
  const done = new Map(session.rounds.map((r) => [r.n, r]));
  const cells = session.table.rows
    .map((row) => {
      const entry = done.get(row.n);
      const cls = entry ? ` class="done ${entry.verdict}"` : "";
      return (
        `<tr${cls}><td>${row.n}</td>` +
        `<td>${row.k_plus ?? "-"}</td>` +
        `<td>${row.k_minus ?? "-"}</td>` +
        `<td>${entry ? entry.k : ""}</td>` +
        `<td>${entry ? entry.verdict.replace("_", " ") : ""}</td></tr>`
      );
    })
    .join("");
  return (
    "<table><thead><tr><th>n</th><th>k+</th><th>k-</th>" +
    "<th>entered k</th><th>verdict</th></tr></thead>" +
    `<tbody>${cells}</tbody></table>`
  );
}

export function mount(): void {
  const api = new ApiClient("");
  const controller = new SessionController(api);

  const createForm = el<HTMLFormElement>("create-form");
  const roundForm = el<HTMLFormElement>("round-form");
  const banner = el<HTMLDivElement>("banner");
  const tableBox = el<HTMLDivElement>("table-box");
  const chartBox = el<HTMLDivElement>("chart-box");
  const meta = el<HTMLDivElement>("session-meta");
  const downloadBtn = el<HTMLButtonElement>("download-trail");

  const render = (state: ControllerState): void => {
    banner.textContent = state.banner.text;
    banner.className = `banner ${state.banner.kind}`;
    const session = state.session;
    roundForm.hidden = !session || session.status !== "active";
    downloadBtn.hidden = !session;
    if (!session) {
      tableBox.innerHTML = "";
      chartBox.innerHTML = "";
      meta.textContent = "";
      return;
    }
    meta.textContent =
      `${session.winner_name} vs ${session.loser_name} - N=${session.N} - ` +
      `status ${session.status.replace("_", " ")} - session ${session.session_id}`;
    tableBox.innerHTML = renderTable(session);
    chartBox.innerHTML = renderChart(session.table.rows, session.rounds);
    const next = session.table.schedule[session.rounds.length];
    if (next !== undefined) {
      el<HTMLInputElement>("round-n").value = String(next);
    }
    const url = new URL(window.location.href);
    url.searchParams.set("session", session.session_id);
    window.history.replaceState(null, "", url);
  };
  controller.subscribe(render);

  createForm.addEventListener("submit", (event) => {
    event.preventDefault();
    try {
      const N = Number(el<HTMLInputElement>("cfg-n").value);
      const gamma = Number(el<HTMLInputElement>("cfg-gamma").value);
      void controller.createSession({
        N,
        rule: buildRule({
          family: el<HTMLSelectElement>("cfg-family").value,
          gamma,
          N,
          prior: el<HTMLSelectElement>("cfg-prior").value,
        }),
        schedule: parseSchedule(el<HTMLInputElement>("cfg-schedule").value),
        winner_name: el<HTMLInputElement>("cfg-winner").value || "announced winner",
        loser_name: el<HTMLInputElement>("cfg-loser").value || "announced loser",
      });
    } catch (err) {
      banner.textContent = err instanceof Error ? err.message : String(err);
      banner.className = "banner error";
    }
  });

  roundForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void controller.submitRound(
      Number(el<HTMLInputElement>("round-n").value),
      Number(el<HTMLInputElement>("round-k").value),
    );
  });

  downloadBtn.addEventListener("click", () => {
    void controller.downloadTrail().then((blob) => {
      if (!blob) return;
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = "audit-trail.json";
      a.click();
      URL.revokeObjectURL(a.href);
    });
  });

  const existing = new URL(window.location.href).searchParams.get("session");
  if (existing) void controller.loadSession(existing);
}

if (typeof document !== "undefined" && document.getElementById("create-form")) {
  mount();
}
