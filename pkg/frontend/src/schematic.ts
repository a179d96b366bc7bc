/**
 * 2-D hand schematic from telemetry joint angles: a side view per digit
 * (two constant-curvature arcs) and a palm-plane spread view. All curves
 * are drawn from the joint angles the service streamed; arc lengths are
 * fixed display proportions.
 */

import type { Telemetry } from "./protocol.js";

export interface DigitTrace {
  digit: string;
  points: Array<[number, number]>;   // side-view polyline, display units
}

export interface SpreadTrace {
  digit: string;
  angleDeg: number;                  // palm-plane direction
}

export interface KapandjiMarker {
  index: number;      // 1..10
  distanceMm: number; // service-computed
  touched: boolean;
}

// display arc lengths per digit: [base, tip]
const DIGIT_ARCS: Record<string, [number, number]> = {
  index: [36, 44],
  middle: [38, 47],
  ring: [36, 44],
  little: [28, 34],
  thumb: [45, 35],
};

// telemetry joint indices per digit: [base channel, tip channel]
const DIGIT_JOINTS: Record<string, [number, number]> = {
  index: [0, 1],
  middle: [2, 3],
  ring: [4, 5],
  little: [6, 7],
  thumb: [10, 11],   // side view shows distal flexion + tip curl
};

function arcPoints(
  start: [number, number],
  heading: number,
  length: number,
  bend: number,
  samples: number,
): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  let [x, y] = start;
  let phi = heading;
  const step = length / samples;
  const dphi = bend / samples;
  for (let k = 0; k < samples; k++) {
    phi += dphi / 2;
    x += step * Math.cos(phi);
    y += step * Math.sin(phi);
    phi += dphi / 2;
    pts.push([x, y]);
  }
  return pts;
}

/** Side view of one digit: base arc then tip arc, curling upward. */
export function digitSideView(frame: Telemetry, digit: string, samples = 12): DigitTrace {
  const [baseLen, tipLen] = DIGIT_ARCS[digit];
  const [baseJoint, tipJoint] = DIGIT_JOINTS[digit];
  const baseBend = frame.joint[baseJoint];
  const tipBend = frame.joint[tipJoint];
  const points: Array<[number, number]> = [[0, 0]];
  const base = arcPoints([0, 0], 0, baseLen, baseBend, samples);
  points.push(...base);
  const last = base[base.length - 1];
  points.push(...arcPoints(last, baseBend, tipLen, tipBend, samples));
  return { digit, points };
}

export function allSideViews(frame: Telemetry): DigitTrace[] {
  return Object.keys(DIGIT_ARCS).map((digit) => digitSideView(frame, digit));
}

/**
 * Palm-plane spread view: each finger's direction from the three abduction
 * joints (each bellow opens the angle between its two neighbours).
 */
export function spreadView(frame: Telemetry): SpreadTrace[] {
  const im = frame.joint[13];
  const mr = frame.joint[14];
  const rl = frame.joint[15];
  const toDeg = (r: number): number => (r * 180) / Math.PI;
  return [
    { digit: "index", angleDeg: toDeg(+0.5 * im) },
    { digit: "middle", angleDeg: toDeg(-0.5 * im + 0.5 * mr) },
    { digit: "ring", angleDeg: toDeg(-0.5 * mr + 0.5 * rl) },
    { digit: "little", angleDeg: toDeg(-0.5 * rl) },
  ];
}

export const KAPANDJI_TOLERANCE_MM = 5;

/** Overlay markers turn green when the service-side distance is in tolerance. */
export function kapandjiMarkers(frame: Telemetry): KapandjiMarker[] {
  return frame.kapandji_mm.map((distanceMm, i) => ({
    index: i + 1,
    distanceMm,
    touched: distanceMm <= KAPANDJI_TOLERANCE_MM,
  }));
}
