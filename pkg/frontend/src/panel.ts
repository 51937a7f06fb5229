import { StripChart } from "./chart.js";
import { ConnectionStatus, PanelConnection } from "./connection.js";
import { regionColor, Sample } from "./protocol.js";
import { SampleStore } from "./ringbuffer.js";

const ERROR_TOAST_MS = 4000;

export function fmt(value: number, digits = 2): string {
  return value.toFixed(digits);
}

/**
 * Front-panel state and DOM wiring. Receipt and rendering are decoupled:
 * samples land in the ring buffer as they arrive and the chart redraws on
 * animation frames, so a burst of messages costs one paint.
 */
export class Panel {
  readonly store = new SampleStore(1200);
  private dirty = false;
  private toastTimer: number | undefined;

  constructor(
    private readonly conn: PanelConnection,
    private readonly chart: StripChart,
    private readonly doc: Document,
  ) {}

  start(): void {
    this.conn.onstatus = (s) => this.showStatus(s);
    this.conn.onsample = (s) => this.takeSample(s);
    this.conn.onservererror = (e) => this.toast(e.message);
    this.conn.onlocalerror = (m) => this.toast(m);
    this.wireControls();
    this.conn.connect();
    const frame = () => {
      if (this.dirty) {
        this.chart.render(this.store.window(this.chart.windowSeconds));
        this.dirty = false;
      }
      requestAnimationFrame(frame);
    };
    requestAnimationFrame(frame);
  }

  private takeSample(sample: Sample): void {
    this.store.push(sample);
    this.dirty = true;
    this.text("val-time", fmt(sample.t, 1));
    this.text("val-temp", fmt(sample.T));
    this.text("val-setpoint", fmt(sample.setpoint, 1));
    this.text("val-drive", fmt(sample.u, 3));
    this.text("val-throttle", fmt(sample.throttle));
    const region = this.doc.getElementById("val-region");
    if (region) {
      region.textContent = sample.region;
      region.style.backgroundColor = regionColor(sample.region);
    }
  }

  private wireControls(): void {
    const spSlider = this.input("setpoint-slider");
    const spEntry = this.input("setpoint-entry");
    if (spSlider && spEntry) {
      spSlider.addEventListener("input", () => {
        spEntry.value = spSlider.value;
      });
      spEntry.addEventListener("change", () => {
        spSlider.value = spEntry.value;
      });
    }
    this.onClick("setpoint-apply", () => {
      const value = Number(spEntry?.value);
      if (!Number.isFinite(value)) {
        this.toast("setpoint entry is not a number");
        return;
      }
      // no optimistic update: the setpoint trace moves when a sample echoes it
      this.conn.send({ type: "set_setpoint", value });
    });

    const thSlider = this.input("throttle-slider");
    const thEntry = this.input("throttle-entry");
    if (thSlider && thEntry) {
      thSlider.addEventListener("input", () => {
        thEntry.value = thSlider.value;
      });
      thEntry.addEventListener("change", () => {
        thSlider.value = thEntry.value;
      });
    }
    this.onClick("throttle-apply", () => {
      const value = Number(thEntry?.value);
      if (!Number.isFinite(value) || value <= 0) {
        this.toast("throttle must be a positive number");
        return;
      }
      this.conn.send({ type: "set_throttle", value });
    });

    this.onClick("btn-pause", () => this.conn.send({ type: "pause" }));
    this.onClick("btn-resume", () => this.conn.send({ type: "resume" }));
    this.onClick("btn-reset", () => this.conn.send({ type: "reset" }));
  }

  private showStatus(status: ConnectionStatus): void {
    const el = this.doc.getElementById("status");
    if (!el) return;
    el.textContent =
      status === "open" ? "connected"
      : status === "connecting" ? "connecting..."
      : "disconnected";
    el.className = `status ${status}`;
  }

  private toast(message: string): void {
    const el = this.doc.getElementById("toast");
    if (!el) return;
    el.textContent = message;
    el.classList.add("visible");
    if (this.toastTimer !== undefined) clearTimeout(this.toastTimer);
    this.toastTimer = setTimeout(
      () => el.classList.remove("visible"),
      ERROR_TOAST_MS,
    ) as unknown as number;
  }

  private text(id: string, value: string): void {
    const el = this.doc.getElementById(id);
    if (el) el.textContent = value;
  }

  private input(id: string): HTMLInputElement | null {
    return this.doc.getElementById(id) as HTMLInputElement | null;
  }

  private onClick(id: string, fn: () => void): void {
    this.doc.getElementById(id)?.addEventListener("click", fn);
  }
}
