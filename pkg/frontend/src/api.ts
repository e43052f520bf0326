// Thin fetch client for the sizing API. The UI talks to nothing else.

import type { ApiError, HardwareTier, SizingRequestBody, SizingResult } from "./types.js";

export class ApiFailure extends Error {
  constructor(public status: number, public errors: ApiError[]) {
    super(errors.map((e) => e.message).join("; ") || `HTTP ${status}`);
  }
}

async function parseErrors(resp: Response): Promise<ApiError[]> {
  try {
    const body = await resp.json();
    if (body && Array.isArray(body.errors)) return body.errors as ApiError[];
  } catch {
    // fall through to a generic error
  }
  return [{ code: "http_error", message: `HTTP ${resp.status}` }];
}

export class SizerApi {
  constructor(private baseUrl: string = "") {}

  async getTiers(): Promise<HardwareTier[]> {
    const resp = await fetch(`${this.baseUrl}/api/v1/tiers`);
    if (!resp.ok) throw new ApiFailure(resp.status, await parseErrors(resp));
    return (await resp.json()) as HardwareTier[];
  }

  /** Submit a sizing request. A 422 still carries a full result body
   *  (every tier infeasible), so it is returned, not thrown. */
  async postSize(request: SizingRequestBody): Promise<SizingResult> {
    const resp = await fetch(`${this.baseUrl}/api/v1/size`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (resp.ok || resp.status === 422) return (await resp.json()) as SizingResult;
    throw new ApiFailure(resp.status, await parseErrors(resp));
  }

  async getRun(runId: string): Promise<{ run_id: string; result: SizingResult }> {
    const resp = await fetch(`${this.baseUrl}/api/v1/runs/${encodeURIComponent(runId)}`);
    if (!resp.ok) throw new ApiFailure(resp.status, await parseErrors(resp));
    return await resp.json();
  }

  reportUrl(runId: string, format: "markdown" | "dot" | "csv", tier?: string): string {
    const base = `${this.baseUrl}/api/v1/runs/${encodeURIComponent(runId)}/report?format=${format}`;
    return tier ? `${base}&tier=${encodeURIComponent(tier)}` : base;
  }
}
