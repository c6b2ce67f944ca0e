import { describe, expect, it } from "vitest";
import { ApiClient, ApiError, pollJob } from "../src/api.js";
import type { JobBody } from "../src/types.js";

const jsonResponse = (status: number, body: unknown): Response =>
  new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });

describe("ApiClient", () => {
  it("posts problems and returns the submit body", async () => {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new ApiClient("http://svc/", async (url, init) => {
      calls.push({ url, init });
      return jsonResponse(202, { job_id: "abc", status: "queued", created: true });
    });
    const res = await client.submitProblem({} as never);
    expect(res).toEqual({ job_id: "abc", status: "queued", created: true });
    expect(calls[0]!.url).toBe("http://svc/problems");
    expect(calls[0]!.init?.method).toBe("POST");
  });

  it("raises ApiError carrying the server's field on 400", async () => {
    const client = new ApiClient("http://svc", async () =>
      jsonResponse(400, { error: "appliances[0].duration_steps: expected an int", field: "appliances[0].duration_steps" }),
    );
    const err = await client.submitProblem({} as never).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.field).toBe("appliances[0].duration_steps");
  });

  it("raises a bare ApiError when the body is not JSON", async () => {
    const client = new ApiClient("http://svc", async () => new Response("gateway", { status: 502 }));
    const err = await client.health().catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.message).toBe("HTTP 502");
  });

  it("builds question payloads with the base hash", async () => {
    let sent: unknown;
    const client = new ApiClient("http://svc", async (_url, init) => {
      sent = JSON.parse(init!.body as string);
      return jsonResponse(202, { job_id: "q", status: "queued", created: true });
    });
    await client.submitQuestion("deadbeef", [{ appliance: "washer", window: [[1, 2]], min_tasks: 1 }]);
    expect(sent).toEqual({
      base_problem_hash: "deadbeef",
      additions: [{ appliance: "washer", window: [[1, 2]], min_tasks: 1 }],
    });
  });
});

describe("pollJob", () => {
  const job = (status: JobBody["status"]): JobBody => ({
    job_id: "j",
    kind: "problem",
    status,
    attempts: 1,
  });

  it("backs off 1s, 2s, 4s, ... capped at 10s", async () => {
    const waits: number[] = [];
    let polls = 0;
    const result = await pollJob(
      async () => (++polls > 7 ? job("done") : job("running")),
      { sleep: async (ms) => void waits.push(ms) },
    );
    expect(result.status).toBe("done");
    expect(waits).toEqual([1000, 2000, 4000, 8000, 10000, 10000, 10000]);
  });

  it("returns failed jobs instead of spinning", async () => {
    let polls = 0;
    const result = await pollJob(async () => {
      polls++;
      return job("failed");
    });
    expect(result.status).toBe("failed");
    expect(polls).toBe(1);
  });

  it("gives up after maxWaitMs", async () => {
    await expect(
      pollJob(async () => job("queued"), {
        initialMs: 100,
        maxWaitMs: 250,
        sleep: async () => {},
      }),
    ).rejects.toThrow("still queued");
  });
});
