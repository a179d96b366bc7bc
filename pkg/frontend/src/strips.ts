/**
 * Channel strip view-models: one vertical strip per channel with a setpoint
 * slider and live readouts. Readouts are verbatim telemetry; the slider
 * scale is pure display normalization learned from the first frame.
 */

import { CHANNELS, type ChannelDef } from "./channels.js";
import type { Telemetry } from "./protocol.js";

export interface StripState {
  channel: ChannelDef;
  sliderFraction: number;   // 0..1 display position of the setpoint
  setpointKg: number;
  massKg: number;
  pressureKpa: number;
  jointDeg: number;
  locked: boolean;          // sliders lock and animate during replay
}

export class SliderScale {
  /** Display range per channel, grown on demand; never fed back to physics. */
  private range: number[] | null = null;

  learn(frame: Telemetry): void {
    if (this.range === null) {
      this.range = frame.mass.map((m) => m * 12);
    }
    for (let i = 0; i < this.range.length; i++) {
      const seen = Math.max(frame.mass[i], frame.setpoint[i]);
      if (seen > this.range[i]) this.range[i] = seen * 1.1;
    }
  }

  fraction(code: number, mass: number): number {
    if (!this.range) return 0;
    return Math.min(Math.max(mass / this.range[code], 0), 1);
  }

  mass(code: number, fraction: number): number {
    if (!this.range) return 0;
    return Math.min(Math.max(fraction, 0), 1) * this.range[code];
  }

  get ready(): boolean {
    return this.range !== null;
  }
}

export function stripStates(frame: Telemetry | null, scale: SliderScale): StripState[] {
  if (frame === null) {
    return CHANNELS.map((channel) => ({
      channel,
      sliderFraction: 0,
      setpointKg: 0,
      massKg: 0,
      pressureKpa: 0,
      jointDeg: 0,
      locked: true,
    }));
  }
  scale.learn(frame);
  const locked = frame.mode === "replaying";
  return CHANNELS.map((channel) => ({
    channel,
    sliderFraction: scale.fraction(channel.code, frame.setpoint[channel.code]),
    setpointKg: frame.setpoint[channel.code],
    massKg: frame.mass[channel.code],
    pressureKpa: frame.pressure[channel.code] / 1e3,
    jointDeg: (frame.joint[channel.code] * 180) / Math.PI,
    locked,
  }));
}
