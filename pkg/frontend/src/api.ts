/**
 * Thin typed client over the workbench HTTP API.  All numbers shown in
 * the UI come from these payloads; the client never recomputes results.
 */

import type { TreeJson } from "./treeEdit.js";

export interface BundleJson {
  polynomials: { key: string; monomials: { c: number; v: [string, number][] }[] }[];
}

export interface GroupLeaf {
  name: string;
  baseline: number;
}

export interface MetaGroup {
  meta: string;
  default: number;
  leaves: GroupLeaf[];
}

export interface CompressResponse {
  feasible: boolean;
  bound: number;
  cut: string[];
  size: number;
  expressiveness: number;
  base_size: number;
  mapping: Record<string, string>;
  distinct_variables: number;
  original_size: number;
  min_size: number;
  groups: MetaGroup[];
}

export interface EvaluateSection {
  values: Record<string, number>;
  deltas: Record<string, number>;
  duration_s: number;
  size: number;
}

export interface EvaluateResponse {
  target: string;
  full?: EvaluateSection;
  compressed?: EvaluateSection;
  speedup_pct?: number;
}

export interface DiagnosticsResponse {
  counts: Record<string, number>;
  base_size: number;
  min_size: number;
  full_size: number;
  frontiers: Record<string, [number, number][]>;
  splits: Record<string, number[]>;
  cut: string[];
}

export interface SessionState {
  id: string;
  size: number | null;
  tree: TreeJson | null;
  baseline: { assignments: Record<string, number>; default: number };
  compression: Omit<CompressResponse, "groups" | "original_size" | "min_size"> | null;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown[] = [],
  ) {
    super(message);
  }
}

export class WorkbenchClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      const err = (payload as { error?: { code?: string; message?: string; details?: unknown[] } }).error;
      throw new ApiError(
        resp.status,
        err?.code ?? "unknown",
        err?.message ?? `HTTP ${resp.status}`,
        err?.details ?? [],
      );
    }
    return payload as T;
  }

  async createSession(): Promise<string> {
    const { id } = await this.request<{ id: string }>("POST", "/api/sessions");
    return id;
  }

  getState(id: string): Promise<SessionState> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  putProvenance(id: string, bundle: BundleJson): Promise<{ size: number; variables: string[] }> {
    return this.request("PUT", `/api/sessions/${id}/provenance`, bundle);
  }

  putTree(id: string, tree: TreeJson): Promise<{ leaves: string[]; nodes: number }> {
    return this.request("PUT", `/api/sessions/${id}/tree`, tree);
  }

  putBaseline(
    id: string,
    assignments: Record<string, number>,
    defaultValue = 1.0,
  ): Promise<{ values: Record<string, number> }> {
    return this.request("PUT", `/api/sessions/${id}/baseline`, {
      assignments,
      default: defaultValue,
    });
  }

  baselineResults(id: string): Promise<{ values: Record<string, number> }> {
    return this.request("GET", `/api/sessions/${id}/baseline-results`);
  }

  compress(id: string, bound: number): Promise<CompressResponse> {
    return this.request("POST", `/api/sessions/${id}/compress`, { bound });
  }

  metavars(id: string): Promise<{ cut: string[]; groups: MetaGroup[] }> {
    return this.request("GET", `/api/sessions/${id}/metavars`);
  }

  diagnostics(id: string): Promise<DiagnosticsResponse> {
    return this.request("GET", `/api/sessions/${id}/diagnostics`);
  }

  evaluate(
    id: string,
    assignments: Record<string, number>,
    target: "full" | "compressed" | "both" = "both",
  ): Promise<EvaluateResponse> {
    return this.request("POST", `/api/sessions/${id}/evaluate`, { assignments, target });
  }
}
