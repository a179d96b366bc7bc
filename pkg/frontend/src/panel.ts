/**
 * Record/replay panel: names recordings, browses the library, replays with
 * a speed dial. The timeline is the setpoint history observed in telemetry
 * while a synergy is active — the panel stores nothing the service didn't
 * stream.
 */

import type { SessionClient } from "./client.js";
import type { Telemetry } from "./protocol.js";

export const SPEED_MIN = 0.25;
export const SPEED_MAX = 4.0;

export interface TimelineSample {
  t: number;
  setpoint: number[];
}

export class RecordReplayPanel {
  speed = 1.0;
  timeline: TimelineSample[] = [];
  private lastMode: string = "idle";

  constructor(private readonly client: SessionClient) {}

  setSpeed(speed: number): void {
    this.speed = Math.min(Math.max(speed, SPEED_MIN), SPEED_MAX);
  }

  beginRecord(name: string): number {
    return this.client.startRecord(name);
  }

  endRecord(): number {
    return this.client.stopRecord();
  }

  replay(entry: string): number {
    this.timeline = [];
    return this.client.replay(entry, this.speed);
  }

  refreshLibrary(): number {
    return this.client.getLibrary();
  }

  /** Feed every telemetry frame; collects the active synergy's timeline. */
  observe(frame: Telemetry): void {
    if (frame.mode === "recording" || frame.mode === "replaying") {
      if (this.lastMode !== frame.mode) this.timeline = [];
      this.timeline.push({ t: frame.t, setpoint: [...frame.setpoint] });
    }
    this.lastMode = frame.mode;
  }
}
