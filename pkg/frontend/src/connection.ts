import { Backoff } from "./backoff.js";
import {
  Ack,
  Command,
  encodeCommand,
  parseServerMessage,
  Sample,
  ServerError,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

// The slice of WebSocket used here; the ws package satisfies it too,
// which is what the tests connect with.
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((err?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface Scheduler {
  set(fn: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const realScheduler: Scheduler = {
  set: (fn, ms) => setTimeout(fn, ms),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

/**
 * WebSocket lifecycle for the panel: dispatches parsed messages, tracks
 * commands awaiting acknowledgment, and reconnects with exponential
 * backoff. At most one reconnect attempt is ever in flight.
 */
export class PanelConnection {
  status: ConnectionStatus = "closed";

  onstatus: ((status: ConnectionStatus) => void) | null = null;
  onsample: ((sample: Sample) => void) | null = null;
  onack: ((ack: Ack) => void) | null = null;
  onservererror: ((err: ServerError) => void) | null = null;
  onlocalerror: ((message: string) => void) | null = null;

  malformedCount = 0;

  private socket: SocketLike | null = null;
  private pending: string[] = [];
  private closedByUser = false;
  private reconnectHandle: unknown = null;
  private readonly backoff: Backoff;
  private readonly scheduler: Scheduler;

  constructor(
    readonly url: string,
    private readonly factory: SocketFactory,
    opts: { backoff?: Backoff; scheduler?: Scheduler } = {},
  ) {
    this.backoff = opts.backoff ?? new Backoff();
    this.scheduler = opts.scheduler ?? realScheduler;
  }

  pendingAcks(): readonly string[] {
    return this.pending;
  }

  connect(): void {
    if (this.socket !== null) return;
    this.closedByUser = false;
    this.setStatus("connecting");
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.backoff.reset();
      this.setStatus("open");
    };
    socket.onmessage = (ev) => this.handleMessage(String(ev.data));
    socket.onerror = () => {
      // the close event that follows carries the reconnect logic
    };
    socket.onclose = () => {
      this.socket = null;
      this.pending = [];
      this.setStatus("closed");
      if (!this.closedByUser) this.scheduleReconnect();
    };
  }

  close(): void {
    this.closedByUser = true;
    if (this.reconnectHandle !== null) {
      this.scheduler.clear(this.reconnectHandle);
      this.reconnectHandle = null;
    }
    this.socket?.close();
  }

  /** Send a command; false (plus a user-visible error) when not connected. */
  send(command: Command): boolean {
    if (this.status !== "open" || this.socket === null) {
      this.onlocalerror?.("not connected; command dropped");
      return false;
    }
    this.socket.send(encodeCommand(command));
    this.pending.push(command.type);
    return true;
  }

  private handleMessage(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg === null) {
      this.malformedCount += 1;
      return;
    }
    if (msg.type === "sample") {
      this.onsample?.(msg);
    } else if (msg.type === "ack") {
      this.pending.shift();
      this.onack?.(msg);
    } else {
      // replies arrive in command order, so an error settles the oldest
      this.pending.shift();
      this.onservererror?.(msg);
    }
  }

  private scheduleReconnect(): void {
    if (this.reconnectHandle !== null) return;
    const delay = this.backoff.next();
    this.reconnectHandle = this.scheduler.set(() => {
      this.reconnectHandle = null;
      this.connect();
    }, delay);
  }

  private setStatus(status: ConnectionStatus): void {
    if (status === this.status) return;
    this.status = status;
    this.onstatus?.(status);
  }
}
