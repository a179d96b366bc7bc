/** Test doubles: a manual clock, a fake socket pair, and a tiny scripted
 * service that speaks the wire protocol with ideal mass tracking. */

import type { SocketLike } from "../src/client.js";
import { N_CHANNELS, channelByName } from "../src/channels.js";
import type { Inbound, Telemetry } from "../src/protocol.js";

export class ManualClock {
  ms = 0;

  now = (): number => this.ms;

  advance(deltaMs: number): void {
    this.ms += deltaMs;
  }
}

export class ManualTimers {
  private queue: Array<{ at: number; fn: () => void }> = [];

  constructor(private readonly clock: ManualClock) {}

  set = (fn: () => void, ms: number): unknown => {
    const entry = { at: this.clock.ms + ms, fn };
    this.queue.push(entry);
    return entry;
  };

  /** Run timers that are due at the current clock. */
  flush(): void {
    const due = this.queue.filter((e) => e.at <= this.clock.ms);
    this.queue = this.queue.filter((e) => e.at > this.clock.ms);
    for (const e of due) e.fn();
  }
}

export class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((event: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  open(): void {
    this.onopen?.();
  }

  receive(msg: object): void {
    this.onmessage?.({ data: JSON.stringify(msg) });
  }
}

const REST_MASS = 1e-5;

/** Minimal service: operator role, ideal setpoint tracking, record/replay. */
export class FakeService {
  setpoints = new Array(N_CHANNELS).fill(REST_MASS);
  mode: Telemetry["mode"] = "idle";
  operator: string | null = null;
  tick = 0;
  library = new Map<string, number[][]>();
  recording: number[][] | null = null;
  recordingName = "";
  replayQueue: number[][] = [];

  handle(client: string, raw: string): Inbound[] {
    const msg = JSON.parse(raw);
    const { id, name, args } = msg;
    const ok = (detail?: unknown): Inbound[] => [
      { v: 1, type: "ack", id, status: "ok", detail } as Inbound,
    ];
    const err = (code: string, detail: string): Inbound[] => [
      { v: 1, type: "error", id, status: "error", code, detail } as Inbound,
    ];
    switch (name) {
      case "claim_operator":
        if (this.operator && this.operator !== client) {
          return err("role-conflict", "another client already holds the operator role");
        }
        this.operator = client;
        if (this.mode === "idle") this.mode = "live";
        return ok({ role: "operator" });
      case "release_operator":
        this.operator = null;
        this.mode = "idle";
        return ok({ role: "observer" });
      case "set_setpoint": {
        if (this.operator !== client) return err("not-operator", "requires operator");
        if (this.mode === "replaying") return err("channel-busy", "sliders locked");
        const ch = channelByName(args.channel as string);
        this.setpoints[ch.code] = args.mass as number;
        if (this.recording) this.recording.push([...this.setpoints]);
        return ok({ channel: args.channel, mass: args.mass });
      }
      case "start_record":
        this.recording = [[...this.setpoints]];
        this.recordingName = args.name as string;
        this.mode = "recording";
        return ok({ recording: args.name });
      case "stop_record":
        this.library.set(this.recordingName, this.recording ?? []);
        this.recording = null;
        this.mode = "live";
        return ok({ stored: this.recordingName });
      case "replay": {
        const samples = this.library.get(args.name as string);
        if (!samples) return err("unknown-entry", `no library entry '${args.name}'`);
        this.replayQueue = samples.map((s) => [...s]);
        this.mode = "replaying";
        return ok({ replaying: args.name, scale: args.scale });
      }
      case "get_library":
        return ok({ entries: [...this.library.keys()] });
      default:
        return err("unknown-command", String(name));
    }
  }

  frame(): Telemetry {
    if (this.mode === "replaying") {
      const next = this.replayQueue.shift();
      if (next) this.setpoints = next;
      else this.mode = "live";
    }
    this.tick += 10;
    return {
      v: 1,
      type: "telemetry",
      tick: this.tick,
      t: this.tick / 300,
      mode: this.mode,
      mass: [...this.setpoints],
      setpoint: [...this.setpoints],
      pressure: this.setpoints.map((m) => (m / REST_MASS - 1) * 1e5),
      joint: this.setpoints.map((m) => Math.min((m / REST_MASS - 1) * 0.5, 1.7)),
      tips: { thumb: [0.1, 0.1, 0], index: [0.17, 0.03, 0], middle: [0.18, 0.01, 0],
              ring: [0.17, -0.01, 0], little: [0.15, -0.03, 0] },
      kapandji_mm: [80, 70, 60, 50, 40, 30, 20, 10, 4, 2],
      operator_held: this.operator !== null,
      clients: 1,
    };
  }
}

/** Wire a client-side FakeSocket to a FakeService instance. */
export function connectFake(service: FakeService, clientId: string): FakeSocket {
  const socket = new FakeSocket();
  const originalSend = socket.send.bind(socket);
  socket.send = (data: string) => {
    originalSend(data);
    for (const reply of service.handle(clientId, data)) {
      socket.receive(reply as unknown as object);
    }
  };
  return socket;
}
