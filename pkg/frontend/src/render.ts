// HTML/SVG string renderers. No framework: every view is a pure function of
// its inputs, which keeps snapshots stable and lets app.ts stay a thin layer
// of event wiring.

import type { TariffDict } from "./types.js";
import type { Lane, ScheduleView, Span } from "./schedule.js";
import { formatPence } from "./money.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const LANE_HEIGHT = 32;
const LABEL_WIDTH = 96;
const BASE_SLOT_WIDTH = 22;

const LANE_COLORS = ["#4e79a7", "#f28e2b", "#59a14f", "#b07aa1", "#76b7b2"];

function laneColor(index: number, lane: Lane): string {
  if (lane.kind === "battery") return "#555";
  return LANE_COLORS[index % LANE_COLORS.length]!;
}

function spanTitle(lane: Lane, span: Span): string {
  const d = span.detail;
  const parts = [
    `${lane.label}: starts slot ${d.startStep}`,
    `${d.durationSteps} slot(s)`,
    `${d.energyWh} Wh`,
  ];
  if (d.costShareMicropence !== null) {
    parts.push(`~${formatPence(d.costShareMicropence)} p (approximate share)`);
  }
  return parts.join(", ");
}

function renderSpan(
  lane: Lane,
  laneIndex: number,
  span: Span,
  slotWidth: number,
): string {
  const x = LABEL_WIDTH + (span.start - 1) * slotWidth;
  const width = (span.end - span.start + 1) * slotWidth;
  const y = laneIndex * LANE_HEIGHT + 5;
  const fill =
    lane.kind === "battery" && span.label === "discharge"
      ? "#b2532f"
      : laneColor(laneIndex, lane);
  return (
    `<rect class="span" data-lane="${escapeHtml(lane.label)}"` +
    ` data-start="${span.start}" data-end="${span.end}"` +
    ` x="${x}" y="${y}" width="${width}" height="${LANE_HEIGHT - 10}" fill="${fill}" rx="3">` +
    `<title>${escapeHtml(spanTitle(lane, span))}</title>` +
    `</rect>` +
    (lane.kind === "battery"
      ? `<text class="span-label" x="${x + 3}" y="${y + 14}">${escapeHtml(span.label)}</text>`
      : "")
  );
}

// zoom scales the slot width; 1 is the default fit.
export function renderSchedule(view: ScheduleView, zoom = 1): string {
  const slotWidth = BASE_SLOT_WIDTH * zoom;
  const width = LABEL_WIDTH + view.horizon * slotWidth;
  const height = view.lanes.length * LANE_HEIGHT + 24;
  const rows = view.lanes
    .map((lane, i) => {
      const y = i * LANE_HEIGHT;
      const spans = lane.spans.map((s) => renderSpan(lane, i, s, slotWidth)).join("");
      return (
        `<g class="lane" data-label="${escapeHtml(lane.label)}">` +
        `<text class="lane-label" x="4" y="${y + 20}">${escapeHtml(lane.label)}</text>` +
        `<line x1="${LABEL_WIDTH}" y1="${y + LANE_HEIGHT}" x2="${width}" y2="${y + LANE_HEIGHT}" stroke="#ddd"/>` +
        spans +
        `</g>`
      );
    })
    .join("");
  const axis = axisTicks(view.horizon, slotWidth, view.lanes.length * LANE_HEIGHT);
  return (
    `<div class="schedule">` +
    `<header class="schedule-header">Total cost: <strong data-role="total-cost">${escapeHtml(view.headerCost)}</strong> p</header>` +
    `<svg viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">` +
    rows +
    axis +
    `</svg>` +
    `</div>`
  );
}

function axisTicks(horizon: number, slotWidth: number, y: number): string {
  const every = horizon > 48 ? 24 : horizon > 12 ? 6 : 1;
  let ticks = "";
  for (let t = 1; t <= horizon; t += every) {
    const x = LABEL_WIDTH + (t - 1) * slotWidth;
    ticks += `<text class="tick" x="${x}" y="${y + 16}">${t}</text>`;
  }
  return ticks;
}

// One-hour-slot price chart: a point per slot per series plus a step path.
export function renderPriceChart(tariff: TariffDict): string {
  const n = tariff.horizon;
  if (
    n === 0 ||
    tariff.import_mp_per_kwh.length === 0 ||
    tariff.export_mp_per_kwh.length === 0
  ) {
    return `<div class="price-chart empty">No tariff data to display.</div>`;
  }
  const width = 60 + n * 6;
  const height = 220;
  const top = Math.max(
    ...tariff.import_mp_per_kwh,
    ...tariff.export_mp_per_kwh,
    1,
  );
  const bottom = Math.min(...tariff.export_mp_per_kwh, ...tariff.import_mp_per_kwh, 0);
  const yOf = (price: number) =>
    20 + ((top - price) / (top - bottom || 1)) * (height - 50);
  const xOf = (slot: number) => 48 + (slot - 1) * 6;

  const series = (values: number[], cls: string, color: string): string => {
    const pts = values
      .map((v, i) => `${xOf(i + 1)},${yOf(v).toFixed(1)}`)
      .join(" ");
    const dots = values
      .map(
        (v, i) =>
          `<circle class="pt ${cls}" cx="${xOf(i + 1)}" cy="${yOf(v).toFixed(1)}" r="1.5" fill="${color}"/>`,
      )
      .join("");
    return `<polyline class="${cls}" points="${pts}" fill="none" stroke="${color}"/>` + dots;
  };

  const topLabel = (top / 1000).toFixed(2);
  const bottomLabel = (bottom / 1000).toFixed(2);
  return (
    `<div class="price-chart">` +
    `<svg viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">` +
    `<text class="axis" x="2" y="24">${topLabel}p</text>` +
    `<text class="axis" x="2" y="${height - 26}">${bottomLabel}p</text>` +
    series(tariff.import_mp_per_kwh, "import", "#c0392b") +
    series(tariff.export_mp_per_kwh, "export", "#2980b9") +
    `</svg>` +
    `<div class="legend">import (red) / export (blue), pence per kWh by hour slot</div>` +
    `</div>`
  );
}

// Side-by-side comparison with the explanation sentence(s) beneath. A failed
// question has no alternative schedule; the message is still shown verbatim.
export function renderComparison(
  original: ScheduleView,
  alternative: ScheduleView | null,
  text: string,
  zoom = 1,
): string {
  const right =
    alternative === null
      ? `<div class="no-alternative">No alternative schedule.</div>`
      : renderSchedule(alternative, zoom);
  return (
    `<div class="comparison">` +
    `<div class="side original"><h3>Cuttlefish AI schedule</h3>${renderSchedule(original, zoom)}</div>` +
    `<div class="side alternative"><h3>Your question</h3>${right}</div>` +
    `<p class="explanation" data-role="explanation">${escapeHtml(text)}</p>` +
    `</div>`
  );
}

export function renderError(message: string): string {
  return (
    `<div class="error-state" role="alert">` +
    `<p>${escapeHtml(message)}</p>` +
    `<button type="button" data-role="retry">Retry</button>` +
    `</div>`
  );
}
