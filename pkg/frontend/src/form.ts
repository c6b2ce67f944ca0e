// Question form model and validation. The rules mirror what the API enforces
// so a form that passes here is never rejected server-side: windows are
// inclusive [start, end] pairs inside 1..horizon and cycles >= 0.

import type { AdditionDict, ProblemDict } from "./types.js";

export interface WindowInput {
  start: number;
  end: number;
}

export interface ApplianceRow {
  name: string;
  checked: boolean;
  windows: WindowInput[];
  minTasks: number;
}

export interface QuestionFormState {
  horizon: number;
  rows: ApplianceRow[];
}

// The battery is not an appliance the user can constrain; it gets no row.
export function emptyForm(problem: ProblemDict): QuestionFormState {
  return {
    horizon: problem.tariff.horizon,
    rows: problem.appliances.map((a) => ({
      name: a.name,
      checked: false,
      windows: [{ start: 1, end: problem.tariff.horizon }],
      minTasks: 1,
    })),
  };
}

export interface FormError {
  appliance: string | null; // null for form-level errors
  message: string;
}

export function validateForm(form: QuestionFormState): FormError[] {
  const errors: FormError[] = [];
  const checked = form.rows.filter((r) => r.checked);
  if (checked.length === 0) {
    errors.push({ appliance: null, message: "select at least one appliance" });
  }
  for (const row of checked) {
    if (!Number.isInteger(row.minTasks) || row.minTasks < 0) {
      errors.push({ appliance: row.name, message: "cycles must be a whole number >= 0" });
    }
    if (row.windows.length === 0) {
      errors.push({ appliance: row.name, message: "add at least one time window" });
    }
    for (const w of row.windows) {
      if (!Number.isInteger(w.start) || !Number.isInteger(w.end)) {
        errors.push({ appliance: row.name, message: "window bounds must be whole hours" });
      } else if (w.start < 1) {
        errors.push({ appliance: row.name, message: "window start must be >= 1" });
      } else if (w.end < w.start) {
        errors.push({ appliance: row.name, message: "window end must not precede its start" });
      } else if (w.end > form.horizon) {
        errors.push({
          appliance: row.name,
          message: `window end must be <= ${form.horizon}`,
        });
      }
    }
  }
  return errors;
}

// Valid form -> question additions payload.
export function formToAdditions(form: QuestionFormState): AdditionDict[] {
  const errors = validateForm(form);
  if (errors.length > 0) {
    throw new Error(errors.map((e) => e.message).join("; "));
  }
  return form.rows
    .filter((r) => r.checked)
    .map((r) => ({
      appliance: r.name,
      window: r.windows.map((w) => [w.start, w.end] as [number, number]),
      min_tasks: r.minTasks,
    }));
}
