/** Analysis client: 300 ms debounce on edits, at most one in-flight request
 * with latest-wins cancellation, and a stale flag so the view can dim results
 * that no longer match the editor state. */

import { AnalyzeRequest, AnalyzeResponse, ImpossibleDetail } from "./types.js";

export type AnalyzeOutcome =
  | { status: "ok"; body: AnalyzeResponse }
  | { status: "impossible"; explanation: string }
  | { status: "invalid"; message: string }
  | { status: "error"; message: string };

export interface SchedulerView {
  /** True from the moment an edit is scheduled until its response lands. */
  stale: boolean;
  inFlight: boolean;
}

export const DEBOUNCE_MS = 300;

async function describeFailure(response: Response): Promise<AnalyzeOutcome> {
  let detail: unknown;
  try {
    detail = ((await response.json()) as { detail?: unknown }).detail;
  } catch {
    detail = undefined;
  }
  if (response.status === 422 && detail && typeof detail === "object" && !Array.isArray(detail)) {
    const d = detail as Partial<ImpossibleDetail> & { message?: string };
    if (d.reason === "impossible_evidence") {
      return { status: "impossible", explanation: d.explanation ?? "history has probability zero" };
    }
    return { status: "invalid", message: d.message ?? "query rejected" };
  }
  if (response.status === 400) {
    const text = Array.isArray(detail)
      ? detail.map((e) => `${(e as { field: string }).field}: ${(e as { message: string }).message}`).join("; ")
      : String((detail as { message?: string })?.message ?? "bad request");
    return { status: "invalid", message: text };
  }
  return { status: "error", message: `server returned ${response.status}` };
}

export class AnalyzeScheduler {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private controller: AbortController | null = null;
  private generation = 0;
  readonly view: SchedulerView = { stale: false, inFlight: false };

  constructor(
    private readonly onResult: (outcome: AnalyzeOutcome) => void,
    private readonly onViewChange: (view: SchedulerView) => void = () => {},
    private readonly baseUrl = "",
    private readonly delayMs = DEBOUNCE_MS,
  ) {}

  /** Debounced: rapid edits collapse into one request for the final state. */
  schedule(request: AnalyzeRequest): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.setView({ stale: true, inFlight: this.view.inFlight });
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(request);
    }, this.delayMs);
  }

  /** Drop any pending request, e.g. when the pedigree becomes empty. */
  cancel(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    this.controller?.abort();
    this.controller = null;
    this.generation += 1;
    this.setView({ stale: false, inFlight: false });
  }

  private async fire(request: AnalyzeRequest): Promise<void> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const generation = ++this.generation;
    this.setView({ stale: true, inFlight: true });
    let outcome: AnalyzeOutcome;
    try {
      const response = await fetch(`${this.baseUrl}/v1/analyze`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
      outcome = response.ok
        ? { status: "ok", body: (await response.json()) as AnalyzeResponse }
        : await describeFailure(response);
    } catch (err) {
      if ((err as Error).name === "AbortError") return; // superseded
      outcome = { status: "error", message: (err as Error).message };
    }
    if (generation !== this.generation) return; // a newer request won
    this.setView({ stale: false, inFlight: false });
    this.onResult(outcome);
  }

  private setView(view: SchedulerView): void {
    this.view.stale = view.stale;
    this.view.inFlight = view.inFlight;
    this.onViewChange({ ...this.view });
  }
}

export async function fetchModels(baseUrl = ""): Promise<unknown[]> {
  const response = await fetch(`${baseUrl}/v1/models`);
  if (!response.ok) throw new Error(`server returned ${response.status}`);
  return (await response.json()) as unknown[];
}
