/** Thin fetch client for the caddie service.
 *
 * Values shown in the UI must be byte-equal to what the service returned,
 * so `valueRaw` exposes the exact response text alongside the parsed form.
 */

import type {
  Booklet, HoleDetail, SimulateRequest, SimulateResponse, ValueResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function ok(resp: Response): Promise<Response> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      detail = (await resp.json()).detail ?? detail;
    } catch {
      /* not json */
    }
    throw new ApiError(resp.status, detail);
  }
  return resp;
}

export class Api {
  constructor(readonly base: string = "") {}

  async holes(): Promise<string[]> {
    const resp = await ok(await fetch(`${this.base}/holes`));
    return (await resp.json()).holes;
  }

  async hole(id: string): Promise<HoleDetail> {
    const resp = await ok(await fetch(`${this.base}/holes/${id}`));
    return resp.json();
  }

  async booklet(player: string, hole: string): Promise<Booklet> {
    const resp = await ok(
      await fetch(`${this.base}/policies/${player}/${hole}`));
    return resp.json();
  }

  /** Exact body text plus the parsed payload of a /values lookup. */
  async valueRaw(player: string, hole: string, row: number, col: number):
      Promise<{ raw: string; parsed: ValueResponse }> {
    const resp = await ok(await fetch(
      `${this.base}/values/${player}/${hole}/${row}/${col}`));
    const raw = await resp.text();
    return { raw, parsed: JSON.parse(raw) as ValueResponse };
  }

  async simulate(req: SimulateRequest): Promise<SimulateResponse> {
    const resp = await ok(await fetch(`${this.base}/simulate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    }));
    return resp.json();
  }
}
