import { describe, expect, it } from "vitest";
import { Backoff } from "../src/backoff.js";
import {
  PanelConnection,
  Scheduler,
  SocketLike,
} from "../src/connection.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: ((err?: unknown) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }
}

class ManualScheduler implements Scheduler {
  tasks: { id: number; fn: () => void; ms: number }[] = [];
  private nextId = 1;

  set(fn: () => void, ms: number): unknown {
    const id = this.nextId++;
    this.tasks.push({ id, fn, ms });
    return id;
  }

  clear(handle: unknown): void {
    this.tasks = this.tasks.filter((t) => t.id !== handle);
  }

  fire(): void {
    const task = this.tasks.shift();
    task?.fn();
  }
}

function harness() {
  const sockets: FakeSocket[] = [];
  const scheduler = new ManualScheduler();
  const conn = new PanelConnection(
    "ws://test/ws",
    () => {
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    },
    { scheduler, backoff: new Backoff(500, 8000) },
  );
  return { conn, sockets, scheduler };
}

const SAMPLE = JSON.stringify({
  type: "sample", seq: 1, t: 0.1, setpoint: 40, T: 30, V: 0.4, u: 1.2,
  region: "II", throttle: 1,
});

describe("PanelConnection", () => {
  it("walks connecting -> open and dispatches messages", () => {
    const { conn, sockets } = harness();
    const statuses: string[] = [];
    const seqs: number[] = [];
    conn.onstatus = (s) => statuses.push(s);
    conn.onsample = (s) => seqs.push(s.seq);
    conn.connect();
    sockets[0].onopen!();
    sockets[0].onmessage!({ data: SAMPLE });
    expect(statuses).toEqual(["connecting", "open"]);
    expect(seqs).toEqual([1]);
  });

  it("refuses to send while closed and reports it", () => {
    const { conn } = harness();
    const errors: string[] = [];
    conn.onlocalerror = (m) => errors.push(m);
    expect(conn.send({ type: "pause" })).toBe(false);
    expect(errors).toHaveLength(1);
  });

  it("sends the exact schema and tracks pending acks in order", () => {
    const { conn, sockets } = harness();
    conn.connect();
    sockets[0].onopen!();
    conn.send({ type: "set_setpoint", value: 45 });
    conn.send({ type: "pause" });
    expect(sockets[0].sent).toEqual([
      '{"type":"set_setpoint","value":45}',
      '{"type":"pause"}',
    ]);
    expect(conn.pendingAcks()).toEqual(["set_setpoint", "pause"]);
    sockets[0].onmessage!({ data: '{"type":"ack","command":"set_setpoint"}' });
    expect(conn.pendingAcks()).toEqual(["pause"]);
  });

  it("settles a pending command when the server reports an error", () => {
    const { conn, sockets } = harness();
    const serverErrors: string[] = [];
    conn.onservererror = (e) => serverErrors.push(e.message);
    conn.connect();
    sockets[0].onopen!();
    conn.send({ type: "set_throttle", value: 0.5 });
    sockets[0].onmessage!({ data: '{"type":"error","message":"rejected"}' });
    expect(serverErrors).toEqual(["rejected"]);
    expect(conn.pendingAcks()).toEqual([]);
  });

  it("counts malformed messages instead of crashing", () => {
    const { conn, sockets } = harness();
    conn.connect();
    sockets[0].onopen!();
    sockets[0].onmessage!({ data: "garbage{" });
    expect(conn.malformedCount).toBe(1);
  });

  it("reconnects with growing delays and resets after success", () => {
    const { conn, sockets, scheduler } = harness();
    conn.connect();
    sockets[0].onopen!();

    sockets[0].onclose!(); // dropped by the server
    expect(scheduler.tasks.map((t) => t.ms)).toEqual([500]);
    scheduler.fire();
    expect(sockets).toHaveLength(2);

    sockets[1].onclose!(); // connect attempt fails again
    expect(scheduler.tasks.map((t) => t.ms)).toEqual([1000]);
    scheduler.fire();

    sockets[2].onopen!(); // success resets the schedule
    sockets[2].onclose!();
    expect(scheduler.tasks.map((t) => t.ms)).toEqual([500]);
  });

  it("schedules at most one reconnect at a time", () => {
    const { conn, sockets, scheduler } = harness();
    conn.connect();
    sockets[0].onopen!();
    sockets[0].onclose!();
    // a second close event from a stale handler must not add a timer
    sockets[0].onclose!();
    expect(scheduler.tasks).toHaveLength(1);
  });

  it("stays down after a user close", () => {
    const { conn, sockets, scheduler } = harness();
    conn.connect();
    sockets[0].onopen!();
    conn.close();
    expect(sockets[0].closed).toBe(true);
    expect(scheduler.tasks).toHaveLength(0);
    expect(conn.status).toBe("closed");
  });
});
