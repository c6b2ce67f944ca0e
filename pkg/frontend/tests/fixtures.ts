// Hand-sized problem + plan fixtures shared across tests. Totals are worked
// by hand and cross-checked by the cost recomputation tests.

import type { PlanDict, ProblemDict, TariffDict } from "../src/types.js";

export const FOUR_STEP_PROBLEM: ProblemDict = {
  tariff: {
    horizon: 4,
    import_mp_per_kwh: [5000, 1000, 1000, 5000],
    export_mp_per_kwh: [3000, 500, 500, 3000],
  },
  battery: {
    capacity_steps: 1,
    rate_wh: 1000,
    initial_charge: 0,
    goal_charges: [0, 1],
  },
  appliances: [
    {
      name: "washer",
      duration_steps: 2,
      rate_wh: 750,
      requirements: [{ window: [[1, 4]], min_tasks: 1 }],
    },
  ],
};

// Washer runs slots 2-3, battery idle throughout.
export const FOUR_STEP_PLAN: PlanDict = {
  actions: [
    { battery: 0, appliances: [0] },
    { battery: 0, appliances: [1] },
    { battery: 0, appliances: [1] },
    { battery: 0, appliances: [0] },
  ],
  total_cost_micropence: 1_500_000,
};

// Battery charges then discharges; no appliances.
export const BATTERY_SWING_PROBLEM: ProblemDict = {
  tariff: {
    horizon: 2,
    import_mp_per_kwh: [1000, 9000],
    export_mp_per_kwh: [500, 6000],
  },
  battery: { capacity_steps: 1, rate_wh: 1000, initial_charge: 0, goal_charges: [0] },
  appliances: [],
};

export const BATTERY_SWING_PLAN: PlanDict = {
  actions: [
    { battery: 1, appliances: [] },
    { battery: -1, appliances: [] },
  ],
  total_cost_micropence: -5_000_000,
};

export function syntheticTariff(horizon: number): TariffDict {
  const imports: number[] = [];
  const exports: number[] = [];
  for (let t = 0; t < horizon; t++) {
    imports.push(5880 + ((t * 911) % 29120));
    exports.push(3960 + ((t * 577) % 13720));
  }
  return { horizon, import_mp_per_kwh: imports, export_mp_per_kwh: exports };
}
