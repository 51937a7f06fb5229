// Wire messages exchanged with the live service: one JSON document per
// WebSocket message. The server is the single source of truth; the panel
// never derives a displayed value from anything but a received sample.

export interface Sample {
  type: "sample";
  seq: number;
  t: number;
  setpoint: number;
  T: number;
  V: number;
  u: number;
  region: string;
  throttle: number;
}

export interface Ack {
  type: "ack";
  command: string;
}

export interface ServerError {
  type: "error";
  message: string;
}

export type ServerMessage = Sample | Ack | ServerError;

const SAMPLE_NUMBER_FIELDS = [
  "seq", "t", "setpoint", "T", "V", "u", "throttle",
] as const;

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null;
}

/** Parse one incoming message; null for anything that is not well formed. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (!isRecord(data)) return null;

  if (data.type === "sample") {
    for (const field of SAMPLE_NUMBER_FIELDS) {
      if (typeof data[field] !== "number" || !Number.isFinite(data[field])) {
        return null;
      }
    }
    if (typeof data.region !== "string") return null;
    return data as unknown as Sample;
  }
  if (data.type === "ack") {
    return typeof data.command === "string" ? (data as unknown as Ack) : null;
  }
  if (data.type === "error") {
    return typeof data.message === "string"
      ? (data as unknown as ServerError)
      : null;
  }
  return null;
}

export type Command =
  | { type: "set_setpoint"; value: number }
  | { type: "set_throttle"; value: number }
  | { type: "set_controller"; value: unknown }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "reset" };

export function encodeCommand(command: Command): string {
  return JSON.stringify(command);
}

// Band colors keyed by the region label reported in each sample. Unknown
// labels (a controller with more than three regions) get the fallback.
export const REGION_COLORS: Record<string, string> = {
  I: "#3a7d5d",
  II: "#b08a2e",
  III: "#8455a3",
};

export const REGION_FALLBACK_COLOR = "#666666";

export function regionColor(region: string): string {
  return REGION_COLORS[region] ?? REGION_FALLBACK_COLOR;
}
