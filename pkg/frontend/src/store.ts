import type { ResultEntry } from "./types.js";

export interface FilterCriteria {
  student?: string;
  verdict?: "Pass" | "Retry";
  minScore?: number;
  maxScore?: number;
}

export type SortKey = "newest" | "score-asc" | "score-desc";

/**
 * Row set keyed by observation id. Rows never mutate after insertion and
 * duplicates (stream replays, reconnect backfills) are dropped, so the
 * table can merge the listing endpoint with live events safely.
 */
export class RowStore {
  private rows = new Map<string, ResultEntry>();

  insert(entry: ResultEntry): boolean {
    const id = entry.observation.id;
    if (this.rows.has(id)) return false;
    this.rows.set(id, entry);
    return true;
  }

  /** Returns how many entries were new. */
  insertMany(entries: ResultEntry[]): number {
    let added = 0;
    for (const e of entries) if (this.insert(e)) added++;
    return added;
  }

  get size(): number {
    return this.rows.size;
  }

  has(id: string): boolean {
    return this.rows.has(id);
  }

  clear(): void {
    this.rows.clear();
  }

  /** Pure view: filtering and sorting never change the underlying rows. */
  view(criteria: FilterCriteria = {}, sort: SortKey = "newest"): ResultEntry[] {
    let rows = [...this.rows.values()];
    if (criteria.student) {
      const needle = criteria.student.toLowerCase();
      rows = rows.filter((r) => r.observation.student.toLowerCase().includes(needle));
    }
    if (criteria.verdict) {
      rows = rows.filter((r) => r.result.verdict === criteria.verdict);
    }
    if (criteria.minScore !== undefined) {
      rows = rows.filter((r) => r.result.score >= criteria.minScore!);
    }
    if (criteria.maxScore !== undefined) {
      rows = rows.filter((r) => r.result.score <= criteria.maxScore!);
    }
    switch (sort) {
      case "score-asc":
        rows.sort((a, b) => a.result.score - b.result.score);
        break;
      case "score-desc":
        rows.sort((a, b) => b.result.score - a.result.score);
        break;
      default:
        // newest first; identical timestamps fall back to descending id
        rows.sort((a, b) => {
          const t = b.observation.timestamp.localeCompare(a.observation.timestamp);
          return t !== 0 ? t : b.observation.id.localeCompare(a.observation.id);
        });
    }
    return rows;
  }
}
