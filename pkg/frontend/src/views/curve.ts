// Performance curve as inline SVG: predicted CPU against service count,
// with the cap line and a red region that starts past the degradation
// threshold (the knee of the curve).

import type { PerformanceCurve } from "../types.js";
import { esc } from "./html.js";

export const WIDTH = 640;
export const HEIGHT = 320;
const MARGIN = { left: 52, right: 16, top: 16, bottom: 40 };

export interface CurveGeometry {
  /** x pixel where the degraded (red) region begins */
  regionX: number;
  regionWidth: number;
  capY: number;
  points: { count: number; cpu: number; x: number; y: number }[];
}

export function curveGeometry(curve: PerformanceCurve, capPct: number): CurveGeometry {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const maxN = curve.points.length > 0 ? curve.points[curve.points.length - 1][0] : 1;
  const maxY = Math.max(capPct, ...curve.points.map(([, cpu]) => cpu)) * 1.05;

  const x = (n: number) => MARGIN.left + (n / maxN) * plotW;
  const y = (v: number) => MARGIN.top + (1 - v / maxY) * plotH;

  const regionX = x(Math.min(curve.degradation_threshold, maxN));
  return {
    regionX,
    regionWidth: Math.max(0, MARGIN.left + plotW - regionX),
    capY: y(capPct),
    points: curve.points.map(([count, cpu]) => ({ count, cpu, x: x(count), y: y(cpu) })),
  };
}

export function renderCurveSvg(curve: PerformanceCurve, capPct: number): string {
  if (curve.points.length === 0) {
    return `<p class="hint">No curve available.</p>`;
  }
  const geo = curveGeometry(curve, capPct);
  const line = geo.points.map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`).join(" ");
  const dots = geo.points
    .map(
      (p) =>
        `<circle class="${p.cpu < capPct ? "pt-safe" : "pt-degraded"}" data-count="${p.count}"` +
        ` cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="3">` +
        `<title>${p.count} services: ${esc(p.cpu)}% CPU</title></circle>`,
    )
    .join("");
  const plotBottom = HEIGHT - MARGIN.bottom;

  return `
<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" class="curve-chart" role="img"
     aria-label="Predicted CPU utilization against number of services">
  <rect class="degraded-region" data-threshold="${curve.degradation_threshold}"
        x="${geo.regionX.toFixed(1)}" y="${MARGIN.top}"
        width="${geo.regionWidth.toFixed(1)}" height="${plotBottom - MARGIN.top}"></rect>
  <line class="cap-line" x1="${MARGIN.left}" y1="${geo.capY.toFixed(1)}"
        x2="${WIDTH - MARGIN.right}" y2="${geo.capY.toFixed(1)}"></line>
  <text class="cap-label" x="${MARGIN.left + 4}" y="${(geo.capY - 5).toFixed(1)}">cap ${esc(capPct)}%</text>
  <polyline class="curve-line" fill="none" points="${line}"></polyline>
  ${dots}
  <line class="axis" x1="${MARGIN.left}" y1="${plotBottom}" x2="${WIDTH - MARGIN.right}" y2="${plotBottom}"></line>
  <line class="axis" x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${plotBottom}"></line>
  <text class="axis-label" x="${WIDTH / 2}" y="${HEIGHT - 8}">number of services</text>
  <text class="axis-label" transform="rotate(-90 14 ${HEIGHT / 2})" x="14" y="${HEIGHT / 2}">CPU %</text>
  <text class="threshold-label" x="${geo.regionX.toFixed(1)}" y="${plotBottom + 16}">
    safe up to ${curve.degradation_threshold}</text>
</svg>`;
}
