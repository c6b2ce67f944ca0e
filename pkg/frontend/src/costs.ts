// Display-only cost arithmetic. The server's totals are authoritative; these
// recomputations exist so the UI can show per-step and per-task figures, and
// tests assert they agree with the API exactly.
//
// Units: price (mp/kWh) x usage (Wh) = micro-pence, as plain integer math.

import type { ActionDict, PlanDict, ProblemDict } from "./types.js";

export function netUsageWh(action: ActionDict, problem: ProblemDict): number {
  let usage = action.battery * problem.battery.rate_wh;
  for (let i = 0; i < problem.appliances.length; i++) {
    if (action.appliances[i]) usage += problem.appliances[i]!.rate_wh;
  }
  return usage;
}

// t is 1-based, matching the plan's timestep indexing.
export function stepCostMicropence(
  t: number,
  action: ActionDict,
  problem: ProblemDict,
): number {
  const usage = netUsageWh(action, problem);
  const price =
    usage < 0
      ? problem.tariff.export_mp_per_kwh[t - 1]
      : problem.tariff.import_mp_per_kwh[t - 1];
  if (price === undefined) throw new Error(`timestep ${t} outside tariff`);
  return price * usage;
}

export function planCostMicropence(plan: PlanDict, problem: ProblemDict): number {
  let total = 0;
  plan.actions.forEach((action, i) => {
    total += stepCostMicropence(i + 1, action, problem);
  });
  return total;
}

// Marginal cost attribution for one appliance running over steps
// startStep..endStep: its consumption priced at whichever branch the whole
// step landed on. Ignores how the task shifted the import/export split, so
// the UI labels it approximate.
export function taskCostShareMicropence(
  applianceIndex: number,
  startStep: number,
  endStep: number,
  plan: PlanDict,
  problem: ProblemDict,
): number {
  const spec = problem.appliances[applianceIndex];
  if (!spec) throw new Error(`no appliance at index ${applianceIndex}`);
  let share = 0;
  for (let t = startStep; t <= endStep; t++) {
    const action = plan.actions[t - 1];
    if (!action) throw new Error(`timestep ${t} outside plan`);
    const usage = netUsageWh(action, problem);
    const price =
      usage < 0
        ? problem.tariff.export_mp_per_kwh[t - 1]!
        : problem.tariff.import_mp_per_kwh[t - 1]!;
    share += price * spec.rate_wh;
  }
  return share;
}
