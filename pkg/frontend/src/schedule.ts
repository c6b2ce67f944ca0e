// Plan JSON -> lane/span view model. Pure data transform so the whole
// structure can be snapshot-tested without a DOM.

import type { PlanDict, ProblemDict } from "./types.js";
import { formatPence } from "./money.js";
import { taskCostShareMicropence } from "./costs.js";

export interface SpanDetail {
  startStep: number;
  durationSteps: number;
  energyWh: number;
  // Marginal attribution; the UI labels it approximate.
  costShareMicropence: number | null;
}

export interface Span {
  start: number; // 1-based, inclusive
  end: number; // inclusive
  label: string;
  detail: SpanDetail;
}

export interface Lane {
  label: string;
  kind: "appliance" | "battery";
  spans: Span[];
}

export interface ScheduleView {
  horizon: number;
  lanes: Lane[];
  totalMicropence: number;
  headerCost: string; // pence, as shown in the header
}

function applianceLane(
  index: number,
  plan: PlanDict,
  problem: ProblemDict,
): Lane {
  const spec = problem.appliances[index]!;
  const spans: Span[] = [];
  let runStart: number | null = null;
  const flush = (endStep: number) => {
    if (runStart === null) return;
    // A valid plan's On-run is a whole number of tasks; carve it up so each
    // span is one task and detail popups describe single cycles.
    for (let s = runStart; s <= endStep; s += spec.duration_steps) {
      const e = Math.min(s + spec.duration_steps - 1, endStep);
      spans.push({
        start: s,
        end: e,
        label: spec.name,
        detail: {
          startStep: s,
          durationSteps: e - s + 1,
          energyWh: spec.rate_wh * (e - s + 1),
          costShareMicropence: taskCostShareMicropence(index, s, e, plan, problem),
        },
      });
    }
    runStart = null;
  };
  plan.actions.forEach((action, i) => {
    const t = i + 1;
    if (action.appliances[index]) {
      if (runStart === null) runStart = t;
    } else {
      flush(t - 1);
    }
  });
  flush(plan.actions.length);
  return { label: spec.name, kind: "appliance", spans };
}

function batteryLane(plan: PlanDict, problem: ProblemDict): Lane {
  const spans: Span[] = [];
  let runStart: number | null = null;
  let runAction = 0;
  const flush = (endStep: number) => {
    if (runStart === null || runAction === 0) return;
    spans.push({
      start: runStart,
      end: endStep,
      label: runAction > 0 ? "charge" : "discharge",
      detail: {
        startStep: runStart,
        durationSteps: endStep - runStart + 1,
        energyWh: runAction * problem.battery.rate_wh * (endStep - runStart + 1),
        costShareMicropence: null,
      },
    });
  };
  plan.actions.forEach((action, i) => {
    const t = i + 1;
    if (action.battery !== runAction) {
      flush(t - 1);
      runStart = t;
      runAction = action.battery;
    }
  });
  flush(plan.actions.length);
  return { label: "battery", kind: "battery", spans };
}

export function buildSchedule(problem: ProblemDict, plan: PlanDict): ScheduleView {
  const horizon = problem.tariff.horizon;
  if (plan.actions.length !== horizon) {
    throw new Error(
      `plan has ${plan.actions.length} steps but the problem horizon is ${horizon}`,
    );
  }
  for (const action of plan.actions) {
    if (action.appliances.length !== problem.appliances.length) {
      throw new Error(
        `plan actions drive ${action.appliances.length} appliances; the problem has ${problem.appliances.length}`,
      );
    }
  }
  const lanes = problem.appliances.map((_, i) => applianceLane(i, plan, problem));
  lanes.push(batteryLane(plan, problem));
  return {
    horizon,
    lanes,
    totalMicropence: plan.total_cost_micropence,
    headerCost: formatPence(plan.total_cost_micropence),
  };
}
