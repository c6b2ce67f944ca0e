// Wire types for the scheduling service API. Shapes mirror the server's
// canonical JSON exactly; all money fields are integer micro-pence and all
// prices are integer milli-pence per kWh.

export interface TariffDict {
  horizon: number;
  import_mp_per_kwh: number[];
  export_mp_per_kwh: number[];
}

export interface RequirementDict {
  window: [number, number][]; // inclusive [start, end] ranges, 1-based timesteps
  min_tasks: number;
}

export interface ApplianceDict {
  name: string;
  duration_steps: number;
  rate_wh: number;
  requirements: RequirementDict[];
}

export interface BatteryDict {
  capacity_steps: number;
  rate_wh: number;
  initial_charge: number;
  goal_charges: number[];
}

export interface ProblemDict {
  tariff: TariffDict;
  battery: BatteryDict;
  appliances: ApplianceDict[];
}

export interface ActionDict {
  battery: -1 | 0 | 1;
  appliances: (0 | 1)[];
}

export interface PlanDict {
  actions: ActionDict[];
  total_cost_micropence: number;
}

export type SolveStatus =
  | "solved"
  | "unsolvable"
  | "time_budget_exceeded"
  | "state_budget_exceeded";

export interface OutcomeDict {
  status: SolveStatus;
  plan: PlanDict | null;
  stats: { visited: number; expanded: number; elapsed_ms: number };
}

export interface ExplanationDict {
  status: SolveStatus;
  cost_original: number;
  cost_alternative: number | null;
  delta: number | null;
  text: string;
  plan_original: PlanDict;
  plan_alternative: PlanDict | null;
}

export type JobStatus = "queued" | "running" | "done" | "failed";

export interface JobBody {
  job_id: string;
  kind: "problem" | "question";
  status: JobStatus;
  attempts: number;
  position?: number;
  result?: OutcomeDict | ExplanationDict;
  error?: string;
}

export interface SubmitResponse {
  job_id: string;
  status: JobStatus;
  created: boolean;
}

export interface AdditionDict {
  appliance: string;
  window: [number, number][];
  min_tasks: number;
}

export interface AgileViolation {
  timestep: number;
  field: "import" | "export";
  price_mp_per_kwh: number;
  message: string;
}

export interface TariffResponse {
  tariff: TariffDict;
  agile_violations: AgileViolation[];
}
