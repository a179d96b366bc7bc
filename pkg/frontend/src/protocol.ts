/**
 * Wire protocol speaking to the pneumahand session service.
 *
 * Versioned JSON messages: telemetry broadcasts, commands, and exactly one
 * ack/error per command. Mirrors the service side; unknown major versions
 * are rejected on arrival.
 */

export const WIRE_VERSION = 1;

export type Mode = "idle" | "live" | "recording" | "replaying" | "experiment";

export interface Telemetry {
  v: number;
  type: "telemetry";
  tick: number;
  t: number;
  mode: Mode;
  mass: number[];        // kg, per channel, true plant mass
  setpoint: number[];    // kg, per channel
  pressure: number[];    // Pa gauge, measured
  joint: number[];       // rad, per channel
  tips: Record<string, number[]>;   // digit -> [x, y, z] m
  kapandji_mm: number[]; // thumb-tip distance to each opposition target
  operator_held: boolean;
  clients: number;
}

export interface Ack {
  v: number;
  type: "ack";
  id: number;
  status: "ok";
  detail?: unknown;
}

export interface ErrorReply {
  v: number;
  type: "error";
  id: number | null;
  status: "error";
  code: string;
  detail: string;
}

export type Inbound = Telemetry | Ack | ErrorReply;

export type CommandName =
  | "claim_operator"
  | "release_operator"
  | "set_setpoint"
  | "start_record"
  | "stop_record"
  | "replay"
  | "stop_replay"
  | "recalibrate"
  | "get_library"
  | "run_experiment"
  | "save_session";

export interface Command {
  v: number;
  type: "command";
  id: number;
  name: CommandName;
  args: Record<string, unknown>;
}

export class ProtocolError extends Error {
  constructor(readonly code: string, detail: string) {
    super(`${code}: ${detail}`);
  }
}

export function makeCommand(
  name: CommandName,
  id: number,
  args: Record<string, unknown> = {},
): Command {
  return { v: WIRE_VERSION, type: "command", id, name, args };
}

export function encode(msg: Command): string {
  return JSON.stringify(msg);
}

export function decode(raw: string): Inbound {
  let msg: unknown;
  try {
    msg = JSON.parse(raw);
  } catch {
    throw new ProtocolError("malformed", "not valid JSON");
  }
  if (typeof msg !== "object" || msg === null) {
    throw new ProtocolError("malformed", "message must be an object");
  }
  const m = msg as Record<string, unknown>;
  if (m.v !== WIRE_VERSION) {
    throw new ProtocolError("version", `unsupported wire version ${String(m.v)}`);
  }
  if (m.type === "telemetry") {
    if (!Array.isArray(m.mass) || !Array.isArray(m.setpoint) || !Array.isArray(m.joint)) {
      throw new ProtocolError("malformed", "telemetry missing channel arrays");
    }
    return m as unknown as Telemetry;
  }
  if (m.type === "ack") {
    if (typeof m.id !== "number") {
      throw new ProtocolError("malformed", "ack without command id");
    }
    return m as unknown as Ack;
  }
  if (m.type === "error") {
    return m as unknown as ErrorReply;
  }
  throw new ProtocolError("malformed", `unknown message type ${String(m.type)}`);
}
