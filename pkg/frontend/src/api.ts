/** Thin typed client for the capforge HTTP service. */

import type {
  DisplayStates,
  EnactmentDoc,
  EnvironmentDoc,
  HistoryDoc,
  MetricsDoc,
  PolicyDoc,
  RefineDecision,
  ReportDoc,
  SceneDoc,
  TestSuiteDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(`${error} (${status}): ${detail}`);
  }
}

async function parse<T>(resp: Response): Promise<T> {
  if (resp.ok) {
    return (await resp.json()) as T;
  }
  let error = "HttpError";
  let detail = resp.statusText;
  try {
    const body = (await resp.json()) as { error?: string; detail?: string };
    error = body.error ?? error;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, error, detail);
}

export class ApiClient {
  constructor(readonly base: string) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  private get<T>(path: string): Promise<T> {
    return fetch(this.url(path)).then((r) => parse<T>(r));
  }

  private send<T>(method: string, path: string, body?: unknown): Promise<T> {
    return fetch(this.url(path), {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => parse<T>(r));
  }

  environment(): Promise<EnvironmentDoc> {
    return this.get("/environment");
  }

  displayStates(): Promise<DisplayStates> {
    return this.get("/environment/states");
  }

  history(): Promise<HistoryDoc> {
    return this.get("/history");
  }

  appendScene(partial: Record<string, string>): Promise<{
    appended: boolean;
    scene: SceneDoc;
    scene_count: number;
  }> {
    return this.send("POST", "/history/scenes", partial);
  }

  newDay(): Promise<{ day: number }> {
    return this.send("POST", "/history/days");
  }

  synthesize(routine: unknown): Promise<{ added: number; scene_count: number }> {
    return this.send("POST", "/history/synthesize", routine);
  }

  listPolicies(): Promise<{ policies: PolicyDoc[] }> {
    return this.get("/policies");
  }

  createPolicy(doc: PolicyDoc): Promise<PolicyDoc> {
    return this.send("POST", "/policies", doc);
  }

  getPolicy(id: string): Promise<PolicyDoc> {
    return this.get(`/policies/${encodeURIComponent(id)}`);
  }

  updatePolicy(doc: PolicyDoc): Promise<PolicyDoc> {
    return this.send("PUT", `/policies/${encodeURIComponent(doc.id)}`, doc);
  }

  deletePolicy(id: string): Promise<{ deleted: string }> {
    return this.send("DELETE", `/policies/${encodeURIComponent(id)}`);
  }

  report(policyId: string): Promise<ReportDoc> {
    return this.send("POST", `/policies/${encodeURIComponent(policyId)}/report`);
  }

  suite(policyId: string, threshold = 0.5, seed = 0): Promise<TestSuiteDoc> {
    const q = `?threshold=${threshold}&seed=${seed}`;
    return this.send("POST", `/policies/${encodeURIComponent(policyId)}/suite${q}`);
  }

  enact(policyId: string, caseId: string): Promise<EnactmentDoc> {
    return this.send(
      "POST",
      `/policies/${encodeURIComponent(policyId)}/cases/${encodeURIComponent(caseId)}/enact`,
    );
  }

  refine(policyId: string, caseId: string, decision: RefineDecision): Promise<PolicyDoc> {
    return this.send(
      "POST",
      `/policies/${encodeURIComponent(policyId)}/cases/${encodeURIComponent(caseId)}/refine`,
      { decision },
    );
  }

  metrics(
    policyId: string,
    split: "train" | "eval" | "all" = "eval",
    seed = 0,
  ): Promise<MetricsDoc> {
    return this.send("POST", `/policies/${encodeURIComponent(policyId)}/metrics`, {
      split,
      seed,
    });
  }
}
