import type { Sample } from "./protocol.js";

export interface StoredSample {
  sample: Sample;
  /** A sequence gap immediately precedes this sample (dropped frames). */
  gapBefore: boolean;
}

export type PushResult = "ok" | "gap" | "duplicate" | "rewind";

/**
 * Fixed-capacity, time-ordered history of received samples.
 *
 * Capacity defaults to two minutes at 10 Hz. A backwards jump in time
 * means the loop was reset, so the history is cleared rather than left
 * with a fold in it; a forward jump in seq is kept but flagged so the
 * chart can show a gap instead of interpolating across it.
 */
export class SampleStore {
  private items: StoredSample[] = [];
  private start = 0; // ring read position
  readonly capacity: number;

  constructor(capacity = 1200) {
    if (capacity < 1) throw new Error("capacity must be at least 1");
    this.capacity = capacity;
  }

  get size(): number {
    return this.items.length;
  }

  latest(): Sample | null {
    if (this.items.length === 0) return null;
    const last = (this.start + this.items.length - 1) % this.items.length;
    return this.items[last].sample;
  }

  push(sample: Sample): PushResult {
    const prev = this.latest();
    let result: PushResult = "ok";
    let gapBefore = false;
    if (prev !== null) {
      if (sample.seq === prev.seq) return "duplicate";
      if (sample.t < prev.t) {
        this.clear();
        result = "rewind";
      } else if (sample.seq > prev.seq + 1) {
        gapBefore = true;
        result = "gap";
      }
    }
    const entry: StoredSample = { sample, gapBefore };
    if (this.items.length < this.capacity) {
      this.items.push(entry);
    } else {
      this.items[this.start] = entry;
      this.start = (this.start + 1) % this.capacity;
    }
    return result;
  }

  clear(): void {
    this.items = [];
    this.start = 0;
  }

  /** Oldest-to-newest copy of everything retained. */
  toArray(): StoredSample[] {
    const out: StoredSample[] = [];
    for (let i = 0; i < this.items.length; i++) {
      out.push(this.items[(this.start + i) % this.items.length]);
    }
    return out;
  }

  /** Samples within the trailing time window, oldest first. */
  window(seconds: number): StoredSample[] {
    const all = this.toArray();
    const newest = this.latest();
    if (newest === null) return all;
    const cutoff = newest.t - seconds;
    return all.filter((s) => s.sample.t >= cutoff);
  }
}
