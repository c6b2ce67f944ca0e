// DOM wiring for the single-page client. All markup comes from the pure
// renderers; this file only reads inputs, drives the API, and swaps innerHTML.

import { ApiClient, ApiError, pollJob } from "./api.js";
import { buildSchedule, type ScheduleView } from "./schedule.js";
import {
  renderComparison,
  renderError,
  renderPriceChart,
  renderSchedule,
  escapeHtml,
} from "./render.js";
import {
  emptyForm,
  validateForm,
  formToAdditions,
  type QuestionFormState,
} from "./form.js";
import type { ExplanationDict, OutcomeDict, ProblemDict } from "./types.js";

export interface AppOptions {
  apiBase: string;
  controlGroup: boolean; // charts and schedule only, no question form
}

interface AppState {
  problem: ProblemDict | null;
  problemId: string | null;
  schedule: ScheduleView | null;
  zoom: number;
  questionInFlight: boolean;
}

const ZOOM_STEP = 1.25;

export function mount(root: HTMLElement, options: AppOptions): void {
  const api = new ApiClient(options.apiBase);
  const state: AppState = {
    problem: null,
    problemId: null,
    schedule: null,
    zoom: 1,
    questionInFlight: false,
  };

  root.innerHTML =
    `<button type="button" id="tariff-toggle" class="floating-left" title="Show the dynamic price tariff">prices</button>` +
    `<div id="tariff-panel" hidden></div>` +
    `<section id="problem-input">` +
    `<h2>Problem</h2>` +
    `<textarea id="problem-json" rows="8" spellcheck="false" placeholder="paste problem JSON"></textarea>` +
    `<button type="button" id="solve">Submit &amp; solve</button>` +
    `<span id="solve-status"></span>` +
    `</section>` +
    `<section id="schedule-area"></section>` +
    (options.controlGroup ? "" : `<section id="question-area"></section>`) +
    `<section id="comparison-area"></section>`;

  const el = <T extends HTMLElement>(id: string): T =>
    root.querySelector<T>(`#${id}`)!;

  // --- price chart behind the floating button -------------------------------
  const tariffPanel = el<HTMLDivElement>("tariff-panel");
  let tariffLoaded = false;
  const loadTariff = async () => {
    tariffPanel.innerHTML = `<p>loading tariff...</p>`;
    try {
      const res = await api.getTariff();
      tariffPanel.innerHTML = renderPriceChart(res.tariff);
      if (res.agile_violations.length > 0) {
        tariffPanel.innerHTML += `<p class="warn">${res.agile_violations.length} price(s) outside the agile bounds</p>`;
      }
      tariffLoaded = true;
    } catch (exc) {
      tariffPanel.innerHTML = renderError(`Could not load the tariff: ${describe(exc)}`);
      tariffPanel
        .querySelector<HTMLButtonElement>("[data-role=retry]")
        ?.addEventListener("click", loadTariff);
    }
  };
  el<HTMLButtonElement>("tariff-toggle").addEventListener("click", () => {
    tariffPanel.hidden = !tariffPanel.hidden;
    if (!tariffPanel.hidden && !tariffLoaded) void loadTariff();
  });

  // --- schedule --------------------------------------------------------------
  const scheduleArea = el<HTMLElement>("schedule-area");
  const drawSchedule = () => {
    if (!state.schedule) return;
    scheduleArea.innerHTML =
      `<div class="zoom-controls">` +
      `<button type="button" id="zoom-out">-</button>` +
      `<button type="button" id="zoom-in">+</button>` +
      `</div>` +
      renderSchedule(state.schedule, state.zoom) +
      `<p id="span-detail" class="muted">select a task for details</p>`;
    el<HTMLButtonElement>("zoom-in").addEventListener("click", () => {
      state.zoom *= ZOOM_STEP;
      drawSchedule();
    });
    el<HTMLButtonElement>("zoom-out").addEventListener("click", () => {
      state.zoom /= ZOOM_STEP;
      drawSchedule();
    });
    scheduleArea.querySelectorAll<SVGRectElement>("rect.span").forEach((rect) => {
      rect.addEventListener("click", () => {
        const title = rect.querySelector("title")?.textContent ?? "";
        el<HTMLParagraphElement>("span-detail").textContent = title;
      });
    });
  };

  const solveButton = el<HTMLButtonElement>("solve");
  const solveStatus = el<HTMLSpanElement>("solve-status");
  solveButton.addEventListener("click", async () => {
    let problem: ProblemDict;
    try {
      problem = JSON.parse(el<HTMLTextAreaElement>("problem-json").value);
    } catch {
      solveStatus.textContent = "not valid JSON";
      return;
    }
    solveButton.disabled = true;
    solveStatus.textContent = "submitting...";
    try {
      const submitted = await api.submitProblem(problem);
      solveStatus.textContent = `job ${submitted.job_id.slice(0, 12)}: waiting...`;
      const job = await pollJob(() => api.getProblem(submitted.job_id));
      if (job.status === "failed") throw new Error(job.error ?? "job failed");
      const outcome = job.result as OutcomeDict;
      if (outcome.status !== "solved" || outcome.plan === null) {
        scheduleArea.innerHTML = renderError(
          `No schedule: the solver reported ${outcome.status.replace(/_/g, " ")}.`,
        );
        solveStatus.textContent = outcome.status;
        return;
      }
      state.problem = problem;
      state.problemId = submitted.job_id;
      state.schedule = buildSchedule(problem, outcome.plan);
      solveStatus.textContent = "solved";
      drawSchedule();
      if (!options.controlGroup) drawQuestionForm(problem);
    } catch (exc) {
      scheduleArea.innerHTML = renderError(describe(exc));
      scheduleArea
        .querySelector<HTMLButtonElement>("[data-role=retry]")
        ?.addEventListener("click", () => solveButton.click());
      solveStatus.textContent = "error";
    } finally {
      solveButton.disabled = false;
    }
  });

  // --- question form ----------------------------------------------------------
  const drawQuestionForm = (problem: ProblemDict) => {
    const area = el<HTMLElement>("question-area");
    const form = emptyForm(problem);
    area.innerHTML =
      `<h2>Ask a question</h2>` +
      `<p class="muted">Require extra appliance cycles and compare the schedules.</p>` +
      form.rows
        .map(
          (row, i) =>
            `<div class="form-row" data-row="${i}">` +
            `<label><input type="checkbox" class="q-check" data-row="${i}"> ${escapeHtml(row.name)}</label>` +
            ` window <input type="number" class="q-start" data-row="${i}" value="1" min="1" max="${form.horizon}" size="4">` +
            ` to <input type="number" class="q-end" data-row="${i}" value="${form.horizon}" min="1" max="${form.horizon}" size="4">` +
            ` cycles <input type="number" class="q-cycles" data-row="${i}" value="1" min="0" size="3">` +
            `</div>`,
        )
        .join("") +
      `<button type="button" id="ask">Ask</button>` +
      `<div id="form-errors" class="form-errors"></div>`;

    el<HTMLButtonElement>("ask").addEventListener("click", async () => {
      if (state.questionInFlight || !state.problem || !state.problemId || !state.schedule) return;
      const filled = readForm(area, form.horizon, problem);
      const errors = validateForm(filled);
      const errorBox = el<HTMLDivElement>("form-errors");
      if (errors.length > 0) {
        errorBox.innerHTML = errors
          .map(
            (e) =>
              `<p class="form-error">${escapeHtml(e.appliance ? `${e.appliance}: ${e.message}` : e.message)}</p>`,
          )
          .join("");
        return;
      }
      errorBox.innerHTML = "";
      state.questionInFlight = true;
      setFormDisabled(area, true);
      try {
        const submitted = await api.submitQuestion(state.problemId, formToAdditions(filled));
        const job = await pollJob(() => api.getQuestion(submitted.job_id));
        if (job.status === "failed") throw new Error(job.error ?? "question failed");
        const explanation = job.result as ExplanationDict;
        const alternative =
          explanation.plan_alternative === null
            ? null
            : buildSchedule(problem, explanation.plan_alternative);
        el<HTMLElement>("comparison-area").innerHTML = renderComparison(
          state.schedule,
          alternative,
          explanation.text,
          state.zoom,
        );
      } catch (exc) {
        if (exc instanceof ApiError && exc.field) {
          errorBox.innerHTML = `<p class="form-error">${escapeHtml(`${exc.field}: ${exc.message}`)}</p>`;
        } else {
          el<HTMLElement>("comparison-area").innerHTML = renderError(describe(exc));
        }
      } finally {
        state.questionInFlight = false;
        setFormDisabled(area, false);
      }
    });
  };

  const readForm = (
    area: HTMLElement,
    horizon: number,
    problem: ProblemDict,
  ): QuestionFormState => {
    const rows = problem.appliances.map((a, i) => {
      const checked = area.querySelector<HTMLInputElement>(`.q-check[data-row="${i}"]`)!.checked;
      const start = Number(area.querySelector<HTMLInputElement>(`.q-start[data-row="${i}"]`)!.value);
      const end = Number(area.querySelector<HTMLInputElement>(`.q-end[data-row="${i}"]`)!.value);
      const cycles = Number(area.querySelector<HTMLInputElement>(`.q-cycles[data-row="${i}"]`)!.value);
      return {
        name: a.name,
        checked,
        windows: [{ start, end }],
        minTasks: cycles,
      };
    });
    return { horizon, rows };
  };

  const setFormDisabled = (area: HTMLElement, disabled: boolean) => {
    area.querySelectorAll("input, button").forEach((node) => {
      (node as HTMLInputElement | HTMLButtonElement).disabled = disabled;
    });
  };
}

function describe(exc: unknown): string {
  if (exc instanceof ApiError) return `${exc.message} (HTTP ${exc.status})`;
  if (exc instanceof Error) return exc.message;
  return String(exc);
}

// Browser entry point; tests import the modules directly instead.
if (typeof document !== "undefined" && document.getElementById("app")) {
  const params = new URLSearchParams(window.location.search);
  mount(document.getElementById("app") as HTMLElement, {
    apiBase: params.get("api") ?? "",
    controlGroup: params.get("group") === "control",
  });
}
