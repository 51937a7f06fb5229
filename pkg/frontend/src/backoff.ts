/** Exponential reconnect delays: base, 2x, 4x ... capped. */
export class Backoff {
  private attempt = 0;

  constructor(
    readonly baseMs = 500,
    readonly capMs = 10_000,
  ) {
    if (baseMs <= 0 || capMs < baseMs) {
      throw new Error("bad backoff bounds");
    }
  }

  next(): number {
    const delay = Math.min(this.baseMs * 2 ** this.attempt, this.capMs);
    this.attempt += 1;
    return delay;
  }

  reset(): void {
    this.attempt = 0;
  }
}
