import type { ResultEntry } from "./types.js";

/** URL helpers for the service's documented HTTP/SSE endpoints. */
export class Api {
  constructor(readonly base: string = "") {}

  listingUrl(sessionId: string): string {
    return `${this.base}/api/sessions/${sessionId}/observations`;
  }

  streamUrl(sessionId: string): string {
    return `${this.base}/api/sessions/${sessionId}/stream`;
  }

  exportUrl(sessionId: string): string {
    return `${this.base}/api/sessions/${sessionId}/export`;
  }

  imageUrl(sessionId: string, observationId: string): string {
    return `${this.base}/api/sessions/${sessionId}/images/${observationId}.png`;
  }

  healthUrl(): string {
    return `${this.base}/api/health`;
  }

  async fetchListing(sessionId: string): Promise<ResultEntry[]> {
    const resp = await fetch(this.listingUrl(sessionId));
    if (!resp.ok) throw new Error(`listing failed: HTTP ${resp.status}`);
    return (await resp.json()) as ResultEntry[];
  }

  async createSession(): Promise<string> {
    const resp = await fetch(`${this.base}/api/sessions`, { method: "POST" });
    if (!resp.ok) throw new Error(`create session failed: HTTP ${resp.status}`);
    return ((await resp.json()) as { session_id: string }).session_id;
  }
}
