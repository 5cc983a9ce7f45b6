// Typed client for the workbench session API. All mutating calls require a
// caller-supplied seed; the server never invents entropy.

export interface GrowthParams {
  tau1: number;
  tau2: number;
  lam: number;
  alpha: number;
  beta: number;
  max_depth: number;
  max_insertions: number;
}

export type ParamOverrides = Partial<GrowthParams>;

export interface UnitNode {
  path: string;
  label: string;
  row: number;
  col: number;
  samples: number;
  qe: number;
  color: string;
  child: MapNode | null;
}

export interface MapNode {
  path: string;
  samples: number;
  rows: number;
  cols: number;
  units: UnitNode[];
}

export interface HierarchySummary {
  depth: number;
  qe0: number;
  params: GrowthParams;
  map: MapNode;
}

export interface SampleRow {
  index: number;
  id?: number;
  name?: string;
  evaluation?: number;
  comment?: string;
  tfidf_max?: number;
  tfidf_sum?: number;
}

export interface SamplesResponse {
  path: string;
  count: number;
  samples: SampleRow[];
}

export interface RefineReport {
  scope_size: number;
  depth_before: number;
  depth_after: number;
  case1_stops: number;
  case2_insertions: number;
  duration_ms: number;
}

export interface RefineResponse {
  scope: string;
  report: RefineReport;
  hierarchy: HierarchySummary;
}

export interface RuleCondition {
  attr: string;
  op: string;
  value: number;
}

export interface FilterRule {
  if: RuleCondition[];
  then: string;
}

export interface RulesResponse {
  rules: FilterRule[];
  tree: unknown;
  tree_text: string;
}

export interface OutgoingMessage {
  record_id: number;
  area: string;
  text: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: Record<string, unknown>,
  ) {
    super(`${status}: ${payload["detail"] ?? payload["error"] ?? "request failed"}`);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function asJson(response: Response): Promise<Record<string, unknown>> {
  const text = await response.text();
  try {
    return text ? (JSON.parse(text) as Record<string, unknown>) : {};
  } catch {
    return { detail: text };
  }
}

export class WorkbenchClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await asJson(response);
    if (!response.ok) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  createSession(params?: ParamOverrides): Promise<{ id: string; params: GrowthParams }> {
    return this.request("POST", "/sessions", { params: params ?? null });
  }

  uploadData(sid: string, csv: string): Promise<{ records: number; features_built: boolean }> {
    return this.request("POST", `/sessions/${sid}/data`, { csv });
  }

  uploadCorpus(
    sid: string,
    documents: { doc_id: string; text: string }[],
  ): Promise<{ documents: number; features_built: boolean }> {
    return this.request("POST", `/sessions/${sid}/corpus`, { documents });
  }

  train(sid: string, seed: number, params?: ParamOverrides): Promise<HierarchySummary> {
    return this.request("POST", `/sessions/${sid}/train`, { seed, params: params ?? null });
  }

  hierarchy(sid: string): Promise<HierarchySummary> {
    return this.request("GET", `/sessions/${sid}/hierarchy`);
  }

  samples(sid: string, path: string): Promise<SamplesResponse> {
    return this.request("GET", `/sessions/${sid}/nodes/${encodeURIComponent(path)}/samples`);
  }

  refine(
    sid: string,
    path: string,
    seed: number,
    overrides?: ParamOverrides,
  ): Promise<RefineResponse> {
    return this.request("POST", `/sessions/${sid}/nodes/${encodeURIComponent(path)}/refine`, {
      seed,
      overrides: overrides ?? null,
    });
  }

  rules(sid: string): Promise<RulesResponse> {
    return this.request("GET", `/sessions/${sid}/rules`);
  }

  filter(
    sid: string,
    csv: string,
    rules?: FilterRule[],
  ): Promise<{ messages: OutgoingMessage[] }> {
    return this.request("POST", `/sessions/${sid}/filter`, { csv, rules: rules ?? null });
  }
}
