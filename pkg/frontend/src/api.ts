// Fetch-based client for the scheduling service. fetch is injectable so unit
// tests can run without a server.

import type {
  AdditionDict,
  JobBody,
  ProblemDict,
  SubmitResponse,
  TariffResponse,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  field: string | null;

  constructor(status: number, message: string, field: string | null = null) {
    super(message);
    this.status = status;
    this.field = field;
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const message =
        typeof payload?.error === "string" ? payload.error : `HTTP ${response.status}`;
      const field = typeof payload?.field === "string" ? payload.field : null;
      throw new ApiError(response.status, message, field);
    }
    return payload as T;
  }

  submitProblem(problem: ProblemDict): Promise<SubmitResponse> {
    return this.request("POST", "/problems", problem);
  }

  getProblem(id: string): Promise<JobBody> {
    return this.request("GET", `/problems/${id}`);
  }

  submitQuestion(baseProblemHash: string, additions: AdditionDict[]): Promise<SubmitResponse> {
    return this.request("POST", "/questions", {
      base_problem_hash: baseProblemHash,
      additions,
    });
  }

  getQuestion(id: string): Promise<JobBody> {
    return this.request("GET", `/questions/${id}`);
  }

  getTariff(): Promise<TariffResponse> {
    return this.request("GET", "/tariff");
  }

  health(): Promise<{ status: string; jobs: Record<string, number> }> {
    return this.request("GET", "/health");
  }
}

export interface PollOptions {
  initialMs?: number; // first wait, doubled each round
  capMs?: number; // backoff ceiling
  maxWaitMs?: number; // give up after this much total waiting
  sleep?: (ms: number) => Promise<void>;
}

const realSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

// Solves can take minutes, so poll with exponential backoff rather than a
// tight loop: 1s, 2s, 4s, ... capped at 10s.
export async function pollJob(
  get: () => Promise<JobBody>,
  options: PollOptions = {},
): Promise<JobBody> {
  const initial = options.initialMs ?? 1_000;
  const cap = options.capMs ?? 10_000;
  const sleep = options.sleep ?? realSleep;
  let wait = initial;
  let waited = 0;
  for (;;) {
    const job = await get();
    if (job.status === "done" || job.status === "failed") return job;
    if (options.maxWaitMs !== undefined && waited >= options.maxWaitMs) {
      throw new Error(`job ${job.job_id} still ${job.status} after ${waited}ms`);
    }
    await sleep(wait);
    waited += wait;
    wait = Math.min(wait * 2, cap);
  }
}
