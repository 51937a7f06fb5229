import { regionColor } from "./protocol.js";
import type { StoredSample } from "./ringbuffer.js";

/** Contiguous run of samples sharing one region: indexes [start, end). */
export interface BandSegment {
  start: number;
  end: number;
  region: string;
}

/**
 * Split a sample window into region band segments. A segment ends where
 * the region label changes or where a sequence gap begins, so the band
 * never paints across dropped frames.
 */
export function bandSegments(samples: StoredSample[]): BandSegment[] {
  const segments: BandSegment[] = [];
  for (let i = 0; i < samples.length; i++) {
    const { sample, gapBefore } = samples[i];
    const open = segments[segments.length - 1];
    if (open && !gapBefore && open.region === sample.region) {
      open.end = i + 1;
    } else {
      segments.push({ start: i, end: i + 1, region: sample.region });
    }
  }
  return segments;
}

export function linearScale(
  domainLo: number,
  domainHi: number,
  rangeLo: number,
  rangeHi: number,
): (value: number) => number {
  const span = domainHi - domainLo;
  if (span === 0) return () => (rangeLo + rangeHi) / 2;
  return (value) => rangeLo + ((value - domainLo) / span) * (rangeHi - rangeLo);
}

export interface AxisRange {
  lo: number;
  hi: number;
}

/** Temperature axis covering both traces with 1 degC of headroom. */
export function tempRange(samples: StoredSample[]): AxisRange {
  if (samples.length === 0) return { lo: 20, hi: 60 };
  let lo = Infinity;
  let hi = -Infinity;
  for (const { sample } of samples) {
    lo = Math.min(lo, sample.T, sample.setpoint);
    hi = Math.max(hi, sample.T, sample.setpoint);
  }
  if (hi - lo < 2) {
    const mid = (lo + hi) / 2;
    lo = mid - 1;
    hi = mid + 1;
  }
  return { lo: lo - 1, hi: hi + 1 };
}

const MARGIN = { top: 8, right: 44, bottom: 26, left: 48 };
const BAND_HEIGHT = 10;

/**
 * Scrolling strip chart: temperature and setpoint against the left axis,
 * drive voltage against the right axis (0 to 4 V), and the active region
 * as a color band underneath. Every drawn value comes from a sample.
 */
export class StripChart {
  constructor(
    private readonly canvas: HTMLCanvasElement,
    readonly windowSeconds = 60,
  ) {}

  render(samples: StoredSample[]): void {
    const ctx = this.canvas.getContext("2d");
    if (ctx === null) return;
    const w = this.canvas.width;
    const h = this.canvas.height;
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = "#11151a";
    ctx.fillRect(0, 0, w, h);
    if (samples.length === 0) return;

    const plotLeft = MARGIN.left;
    const plotRight = w - MARGIN.right;
    const plotTop = MARGIN.top;
    const bandTop = h - MARGIN.bottom - BAND_HEIGHT;
    const plotBottom = bandTop - 4;

    const tHi = samples[samples.length - 1].sample.t;
    const tLo = tHi - this.windowSeconds;
    const x = linearScale(tLo, tHi, plotLeft, plotRight);
    const temps = tempRange(samples);
    const yTemp = linearScale(temps.lo, temps.hi, plotBottom, plotTop);
    const yDrive = linearScale(0, 4, plotBottom, plotTop);

    this.drawAxes(ctx, temps, x, yTemp, plotLeft, plotRight, plotTop,
                  plotBottom, tLo, tHi);

    // region band, then traces on top
    for (const seg of bandSegments(samples)) {
      const x0 = x(samples[seg.start].sample.t);
      const x1 = x(samples[seg.end - 1].sample.t);
      ctx.fillStyle = regionColor(seg.region);
      ctx.fillRect(x0, bandTop, Math.max(x1 - x0, 1), BAND_HEIGHT);
    }

    this.tracePath(ctx, samples, x, (s) => yTemp(s.setpoint), "#d7a940",
                   [5, 4]);
    this.tracePath(ctx, samples, x, (s) => yTemp(s.T), "#e25822", []);
    this.tracePath(ctx, samples, x, (s) => yDrive(s.u), "#4aa3df", []);

    // a dropped frame shows as a pale tick rather than a bridged line
    ctx.strokeStyle = "#cccccc";
    ctx.setLineDash([2, 3]);
    for (const { sample, gapBefore } of samples) {
      if (!gapBefore) continue;
      const gx = x(sample.t);
      ctx.beginPath();
      ctx.moveTo(gx, plotTop);
      ctx.lineTo(gx, bandTop + BAND_HEIGHT);
      ctx.stroke();
    }
    ctx.setLineDash([]);
  }

  private tracePath(
    ctx: CanvasRenderingContext2D,
    samples: StoredSample[],
    x: (t: number) => number,
    y: (s: StoredSample["sample"]) => number,
    color: string,
    dash: number[],
  ): void {
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.5;
    ctx.setLineDash(dash);
    ctx.beginPath();
    let pen = false;
    for (const stored of samples) {
      const px = x(stored.sample.t);
      const py = y(stored.sample);
      if (!pen || stored.gapBefore) {
        ctx.moveTo(px, py);
        pen = true;
      } else {
        ctx.lineTo(px, py);
      }
    }
    ctx.stroke();
    ctx.setLineDash([]);
  }

  private drawAxes(
    ctx: CanvasRenderingContext2D,
    temps: AxisRange,
    x: (t: number) => number,
    yTemp: (v: number) => number,
    left: number,
    right: number,
    top: number,
    bottom: number,
    tLo: number,
    tHi: number,
  ): void {
    ctx.strokeStyle = "#2c333b";
    ctx.fillStyle = "#8a939e";
    ctx.font = "10px system-ui, sans-serif";
    ctx.lineWidth = 1;

    const tempStep = niceStep(temps.hi - temps.lo);
    for (let v = Math.ceil(temps.lo / tempStep) * tempStep;
         v <= temps.hi; v += tempStep) {
      const py = yTemp(v);
      ctx.beginPath();
      ctx.moveTo(left, py);
      ctx.lineTo(right, py);
      ctx.stroke();
      ctx.fillText(`${v.toFixed(0)}`, 4, py + 3);
    }
    for (let v = 0; v <= 4; v++) {
      const py = linearScale(0, 4, bottom, top)(v);
      ctx.fillText(`${v} V`, right + 6, py + 3);
    }
    const tStep = niceStep(tHi - tLo);
    for (let t = Math.ceil(tLo / tStep) * tStep; t <= tHi; t += tStep) {
      ctx.fillText(`${t.toFixed(0)}s`, x(t) - 8, bottom + BAND_HEIGHT + 18);
    }
  }
}

function niceStep(span: number): number {
  const raw = span / 6;
  const mag = 10 ** Math.floor(Math.log10(Math.max(raw, 1e-9)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}
