/**
 * Single view-state store. Socket frames and command replies are applied
 * here on one event loop; every number the board displays originates from
 * the latest telemetry frame — the store computes no physics.
 */

import type { Inbound, Mode, Telemetry } from "./protocol.js";

export const STALE_AFTER_MS = 1000;
export const ACK_TIMEOUT_MS = 2000;

export type ConnectionState = "connecting" | "open" | "closed";
export type Role = "observer" | "operator";
export type CommandStatus = "pending" | "ok" | "error" | "timeout";

export interface PendingCommand {
  id: number;
  name: string;
  sentAt: number;           // ms clock
  status: CommandStatus;
  code?: string;
  detail?: unknown;
}

export interface Toast {
  kind: "error" | "info";
  text: string;
  at: number;
}

export class SessionStore {
  connection: ConnectionState = "connecting";
  role: Role = "observer";
  frame: Telemetry | null = null;
  lastFrameAt: number | null = null;
  commands = new Map<number, PendingCommand>();
  toasts: Toast[] = [];
  libraryEntries: string[] = [];
  recordingName: string | null = null;
  replayingEntry: string | null = null;

  private listeners: Array<() => void> = [];

  subscribe(fn: () => void): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  private emit(): void {
    for (const fn of this.listeners) fn();
  }

  get mode(): Mode {
    return this.frame?.mode ?? "idle";
  }

  isStale(nowMs: number): boolean {
    return this.lastFrameAt !== null && nowMs - this.lastFrameAt > STALE_AFTER_MS;
  }

  setConnection(state: ConnectionState): void {
    this.connection = state;
    if (state !== "open") this.role = "observer";
    this.emit();
  }

  commandSent(id: number, name: string, nowMs: number): void {
    this.commands.set(id, { id, name, sentAt: nowMs, status: "pending" });
    this.emit();
  }

  apply(msg: Inbound, nowMs: number): void {
    if (msg.type === "telemetry") {
      this.frame = msg;
      this.lastFrameAt = nowMs;
      if (msg.mode !== "recording") this.recordingName = null;
      if (msg.mode !== "replaying") this.replayingEntry = null;
      this.emit();
      return;
    }
    const pending = msg.id === null ? undefined : this.commands.get(msg.id);
    if (msg.type === "ack") {
      if (pending) {
        pending.status = "ok";
        pending.detail = msg.detail;
        this.onAck(pending.name, msg.detail);
      }
    } else {
      if (pending) {
        pending.status = "error";
        pending.code = msg.code;
        pending.detail = msg.detail;
      }
      this.toasts.push({ kind: "error", text: `${msg.code}: ${msg.detail}`, at: nowMs });
    }
    this.emit();
  }

  private onAck(name: string, detail: unknown): void {
    const d = (detail ?? {}) as Record<string, unknown>;
    if (name === "claim_operator") this.role = "operator";
    if (name === "release_operator") this.role = "observer";
    if (name === "get_library" && Array.isArray(d.entries)) {
      this.libraryEntries = d.entries as string[];
    }
    if (name === "start_record" && typeof d.recording === "string") {
      this.recordingName = d.recording;
    }
    if (name === "stop_record") this.recordingName = null;
    if (name === "replay" && typeof d.replaying === "string") {
      this.replayingEntry = d.replaying;
    }
  }

  /** Flip pending commands past the ack deadline to a visible timeout. */
  markTimeouts(nowMs: number): boolean {
    let changed = false;
    for (const cmd of this.commands.values()) {
      if (cmd.status === "pending" && nowMs - cmd.sentAt > ACK_TIMEOUT_MS) {
        cmd.status = "timeout";
        this.toasts.push({
          kind: "error",
          text: `${cmd.name} not acknowledged within ${ACK_TIMEOUT_MS} ms`,
          at: nowMs,
        });
        changed = true;
      }
    }
    if (changed) this.emit();
    return changed;
  }

  hasRoleConflict(): boolean {
    for (const cmd of this.commands.values()) {
      if (cmd.name === "claim_operator" && cmd.code === "role-conflict") return true;
    }
    return false;
  }
}
