/**
 * Session client: socket lifecycle, command correlation, slider debounce.
 *
 * Reconnects automatically after a drop, always as a plain observer — the
 * operator role is only ever claimed by an explicit user action. Slider
 * input is rate-limited to at most one command per channel per tick of
 * 1000/30 ms, with a trailing send so the final position always lands.
 */

import { channelByName } from "./channels.js";
import {
  type CommandName,
  decode,
  encode,
  makeCommand,
  ProtocolError,
} from "./protocol.js";
import { SessionStore } from "./store.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
}

export interface ClientOptions {
  socketFactory: () => SocketLike;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  reconnectDelayMs?: number;
}

export const MIN_COMMAND_INTERVAL_MS = 1000 / 30;

export class SessionClient {
  readonly store: SessionStore;
  private socket: SocketLike | null = null;
  private nextId = 1;
  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;
  private readonly reconnectDelayMs: number;
  private closedByUser = false;
  private lastSliderSend = new Map<number, number>();
  private trailingSlider = new Map<number, { value: number; handle: unknown }>();

  constructor(private readonly options: ClientOptions, store?: SessionStore) {
    this.store = store ?? new SessionStore();
    this.now = options.now ?? (() => Date.now());
    this.setTimer = options.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
  }

  connect(): void {
    this.closedByUser = false;
    this.store.setConnection("connecting");
    const socket = this.options.socketFactory();
    this.socket = socket;
    socket.onopen = () => this.store.setConnection("open");
    socket.onmessage = (event) => this.onRaw(String(event.data));
    socket.onclose = () => {
      this.store.setConnection("closed");
      this.socket = null;
      if (!this.closedByUser) {
        this.setTimer(() => this.connect(), this.reconnectDelayMs);
      }
    };
  }

  disconnect(): void {
    this.closedByUser = true;
    this.socket?.close();
    this.socket = null;
    this.store.setConnection("closed");
  }

  private onRaw(raw: string): void {
    let msg;
    try {
      msg = decode(raw);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.store.toasts.push({ kind: "error", text: err.message, at: this.now() });
        return;
      }
      throw err;
    }
    this.store.apply(msg, this.now());
  }

  /** Send one command; returns its id for correlation. */
  command(name: CommandName, args: Record<string, unknown> = {}): number {
    const id = this.nextId++;
    const msg = makeCommand(name, id, args);
    this.store.commandSent(id, name, this.now());
    this.socket?.send(encode(msg));
    return id;
  }

  claimOperator(): number {
    return this.command("claim_operator");
  }

  releaseOperator(): number {
    return this.command("release_operator");
  }

  startRecord(name: string): number {
    return this.command("start_record", { name });
  }

  stopRecord(): number {
    return this.command("stop_record");
  }

  /** Replay at a speed dial value; the wire carries a timestamp stretch. */
  replay(entry: string, speed = 1.0): number {
    return this.command("replay", { name: entry, scale: 1.0 / speed });
  }

  stopReplay(): number {
    return this.command("stop_replay");
  }

  recalibrate(channelName: string): number {
    return this.command("recalibrate", { channel: channelName });
  }

  getLibrary(): number {
    return this.command("get_library");
  }

  /**
   * Slider move: emits set_setpoint, rate-limited per channel; a trailing
   * timer flushes the latest value so releases are never lost.
   */
  setSetpoint(channelName: string, mass: number): void {
    const ch = channelByName(channelName);
    const now = this.now();
    const last = this.lastSliderSend.get(ch.code) ?? -Infinity;
    const trailing = this.trailingSlider.get(ch.code);
    if (now - last >= MIN_COMMAND_INTERVAL_MS && !trailing) {
      this.lastSliderSend.set(ch.code, now);
      this.command("set_setpoint", { channel: channelName, mass });
      return;
    }
    if (trailing) {
      trailing.value = mass;
      return;
    }
    const delay = MIN_COMMAND_INTERVAL_MS - (now - last);
    const entry = { value: mass, handle: null as unknown };
    entry.handle = this.setTimer(() => {
      this.trailingSlider.delete(ch.code);
      this.lastSliderSend.set(ch.code, this.now());
      this.command("set_setpoint", { channel: channelName, mass: entry.value });
    }, delay);
    this.trailingSlider.set(ch.code, entry);
  }

  /** Periodic upkeep: surfaces unacknowledged commands. Call at ~10 Hz. */
  tick(): void {
    this.store.markTimeouts(this.now());
  }
}
