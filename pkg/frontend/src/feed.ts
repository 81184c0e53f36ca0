import { RowStore } from "./store.js";
import type { ConnectionState, ResultEntry } from "./types.js";

/** Minimal slice of EventSource so tests can drive a fake; a real
 * EventSource satisfies it structurally (message events carry .data). */
export interface EventSourceLike {
  onopen: ((ev: unknown) => void) | null;
  onmessage: ((ev: { data: string }) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  close(): void;
}

export type EventSourceFactory = (url: string) => EventSourceLike;
export type ListingFetcher = (sessionId: string) => Promise<ResultEntry[]>;

export interface FeedCallbacks {
  onRows?: (store: RowStore) => void;
  onStatus?: (state: ConnectionState) => void;
}

/**
 * Live row feed for one session: on every (re)connect it backfills the
 * full listing, then appends stream events; the id-keyed store keeps each
 * observation exactly once no matter how the two sources interleave.
 * Reconnection itself is EventSource's native behavior.
 */
export class LiveFeed {
  readonly store = new RowStore();
  private source: EventSourceLike | null = null;

  constructor(
    private makeSource: EventSourceFactory,
    private fetchListing: ListingFetcher,
    private callbacks: FeedCallbacks = {},
  ) {}

  connect(sessionId: string, streamUrl: string): void {
    this.disconnect();
    this.callbacks.onStatus?.("connecting");
    const source = this.makeSource(streamUrl);
    this.source = source;
    source.onopen = () => {
      this.callbacks.onStatus?.("connected");
      void this.backfill(sessionId);
    };
    source.onmessage = (ev) => {
      const entry = JSON.parse(ev.data) as ResultEntry;
      if (this.store.insert(entry)) this.callbacks.onRows?.(this.store);
    };
    source.onerror = () => {
      this.callbacks.onStatus?.("disconnected");
    };
  }

  async backfill(sessionId: string): Promise<void> {
    const entries = await this.fetchListing(sessionId);
    if (this.store.insertMany(entries) > 0 || this.store.size === 0) {
      this.callbacks.onRows?.(this.store);
    }
  }

  disconnect(): void {
    this.source?.close();
    this.source = null;
  }
}
