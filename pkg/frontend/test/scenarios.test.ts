/**
 * Scripted end-to-end scenarios against the scripted service double:
 * slider -> telemetry echo within two frames, record -> replay animating
 * identical values, the role-conflict banner, and the stale-data indicator.
 */

import { describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { RecordReplayPanel } from "../src/panel.js";
import { SliderScale, stripStates } from "../src/strips.js";
import { STALE_AFTER_MS } from "../src/store.js";
import {
  FakeService,
  FakeSocket,
  ManualClock,
  ManualTimers,
  connectFake,
} from "./helpers.js";

function boot(service: FakeService, id: string): {
  client: SessionClient;
  socket: FakeSocket;
  clock: ManualClock;
  timers: ManualTimers;
} {
  const clock = new ManualClock();
  const timers = new ManualTimers(clock);
  const socket = connectFake(service, id);
  const client = new SessionClient({
    socketFactory: () => socket,
    now: clock.now,
    setTimer: timers.set,
  });
  client.connect();
  socket.open();
  return { client, socket, clock, timers };
}

describe("acceptance scenarios", () => {
  it("slider change shows up in the telemetry setpoint within two frames", () => {
    const service = new FakeService();
    const { client, socket, clock } = boot(service, "op");
    client.claimOperator();
    const target = 4.2e-5;
    client.setSetpoint("MIDDLE_BASE", target);
    let framesUntilSeen = 0;
    for (let k = 0; k < 2; k++) {
      socket.receive(service.frame() as unknown as object);
      clock.advance(33);
      framesUntilSeen++;
      if (client.store.frame!.setpoint[2] === target) break;
    }
    expect(framesUntilSeen).toBeLessThanOrEqual(2);
    expect(client.store.frame!.setpoint[2]).toBe(target);
  });

  it("record then replay animates the sliders through identical values", () => {
    const service = new FakeService();
    const { client, socket, clock, timers } = boot(service, "op");
    const panel = new RecordReplayPanel(client);
    const scale = new SliderScale();
    client.claimOperator();
    socket.receive(service.frame() as unknown as object);

    panel.beginRecord("wave");
    const moves = [2.2e-5, 3.4e-5, 1.6e-5];
    for (const mass of moves) {
      clock.advance(40);
      timers.flush();
      client.setSetpoint("INDEX_BASE", mass);
      socket.receive(service.frame() as unknown as object);
    }
    panel.endRecord();
    expect(client.store.recordingName).toBeNull();

    // replay: sliders are locked and walk the recorded values
    panel.replay("wave");
    const seen: number[] = [];
    for (let k = 0; k < 8 && client.store.mode !== "live"; k++) {
      socket.receive(service.frame() as unknown as object);
      const strips = stripStates(client.store.frame, scale);
      expect(strips.every((s) => s.locked || client.store.mode === "live")).toBe(true);
      seen.push(client.store.frame!.setpoint[0]);
    }
    for (const mass of moves) {
      expect(seen).toContain(mass);
    }
  });

  it("a second operator claim raises the role-conflict banner", () => {
    const service = new FakeService();
    const first = boot(service, "op-1");
    first.client.claimOperator();
    expect(first.client.store.role).toBe("operator");

    const second = boot(service, "op-2");
    second.client.claimOperator();
    expect(second.client.store.role).toBe("observer");
    expect(second.client.store.hasRoleConflict()).toBe(true);
    expect(second.client.store.toasts.at(-1)!.text).toContain("role-conflict");

    // release lets the second tab claim
    first.client.releaseOperator();
    second.client.claimOperator();
    expect(second.client.store.role).toBe("operator");
  });

  it("service rejects setpoints from non-operators (board disables the strip)", () => {
    const service = new FakeService();
    const { client, socket } = boot(service, "viewer");
    const before = socket.sent.length;
    // the board disables observer strips; if a command slips through anyway,
    // the service rejects it and nothing moves
    client.setSetpoint("INDEX_BASE", 9e-5);
    const replies = socket.sent.length - before;
    expect(replies).toBe(1);
    expect(client.store.commands.get(1)!.status).toBe("error");
    expect(service.setpoints[0]).not.toBe(9e-5);
  });

  it("stale-data indicator trips after one second without frames", () => {
    const service = new FakeService();
    const { client, socket, clock } = boot(service, "watch");
    socket.receive(service.frame() as unknown as object);
    expect(client.store.isStale(clock.now())).toBe(false);
    clock.advance(STALE_AFTER_MS + 1);
    expect(client.store.isStale(clock.now())).toBe(true);
    socket.receive(service.frame() as unknown as object);
    expect(client.store.isStale(clock.now())).toBe(false);
  });
});
