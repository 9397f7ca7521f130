/** SVG threshold chart: k+ and k- against round size, with the entered
 * trajectory overlaid.  Pure string construction so it is unit-testable
 * without a DOM.
 */

import type { RoundView, TableRow } from "./api.js";

const WIDTH = 640;
const HEIGHT = 320;
const PAD = 44;

interface Scale {
  (value: number): number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  return (v) => outLo + ((v - lo) / span) * (outHi - outLo);
}

function polyline(points: Array<[number, number]>, cls: string): string {
  if (points.length === 0) return "";
  const attr = points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" ");
  return `<polyline class="${cls}" fill="none" points="${attr}" />`;
}

export function renderChart(rows: TableRow[], rounds: RoundView[]): string {
  const ns = rows.map((r) => r.n);
  const ys = rows
    .flatMap((r) => [r.k_plus, r.k_minus])
    .concat(rounds.map((r) => r.k))
    .filter((v): v is number => v !== null);
  const nMax = Math.max(...ns, 1);
  const yMax = Math.max(...ys, 1);
  const sx = linearScale(0, nMax, PAD, WIDTH - 8);
  const sy = linearScale(0, yMax, HEIGHT - PAD, 8);

  const kPlus = rows
    .filter((r) => r.k_plus !== null)
    .map((r): [number, number] => [sx(r.n), sy(r.k_plus as number)]);
  const kMinus = rows
    .filter((r) => r.k_minus !== null)
    .map((r): [number, number] => [sx(r.n), sy(r.k_minus as number)]);
  const trajectory = rounds.map((r): [number, number] => [sx(r.n), sy(r.k)]);

  const dots = rounds
    .map(
      (r) =>
        `<circle class="entered" cx="${sx(r.n).toFixed(1)}" cy="${sy(r.k).toFixed(1)}" r="4" />`,
    )
    .join("");

  const axes =
    `<line class="axis" x1="${PAD}" y1="${HEIGHT - PAD}" x2="${WIDTH - 8}" y2="${HEIGHT - PAD}" />` +
    `<line class="axis" x1="${PAD}" y1="8" x2="${PAD}" y2="${HEIGHT - PAD}" />` +
    `<text class="label" x="${WIDTH / 2}" y="${HEIGHT - 8}">cumulative sample size n</text>` +
    `<text class="label" x="14" y="${HEIGHT / 2}" transform="rotate(-90 14 ${HEIGHT / 2})">winner ballots k</text>`;

  return (
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="audit thresholds">` +
    axes +
    polyline(kPlus, "kplus") +
    polyline(kMinus, "kminus") +
    polyline(trajectory, "trajectory") +
    dots +
    `</svg>`
  );
}
