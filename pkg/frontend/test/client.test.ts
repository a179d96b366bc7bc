import { describe, expect, it } from "vitest";

import { MIN_COMMAND_INTERVAL_MS, SessionClient } from "../src/client.js";
import {
  FakeService,
  FakeSocket,
  ManualClock,
  ManualTimers,
  connectFake,
} from "./helpers.js";

function setup(): {
  clock: ManualClock;
  timers: ManualTimers;
  client: SessionClient;
  service: FakeService;
  sockets: FakeSocket[];
} {
  const clock = new ManualClock();
  const timers = new ManualTimers(clock);
  const service = new FakeService();
  const sockets: FakeSocket[] = [];
  const client = new SessionClient({
    socketFactory: () => {
      const socket = connectFake(service, "c1");
      sockets.push(socket);
      return socket;
    },
    now: clock.now,
    setTimer: timers.set,
    reconnectDelayMs: 500,
  });
  client.connect();
  sockets[0].open();
  return { clock, timers, client, service, sockets };
}

describe("session client", () => {
  it("claims the operator role through the ack round trip", () => {
    const { client } = setup();
    client.claimOperator();
    expect(client.store.role).toBe("operator");
  });

  it("debounces slider streams to at most 30 commands per second", () => {
    const { clock, timers, client, sockets } = setup();
    client.claimOperator();
    const before = sockets[0].sent.length;
    // a 60-event drag burst over one second
    for (let k = 0; k < 60; k++) {
      client.setSetpoint("INDEX_BASE", 1e-5 + k * 1e-8);
      clock.advance(1000 / 60);
      timers.flush();
    }
    timers.flush();
    const sliderCommands = sockets[0].sent.length - before;
    expect(sliderCommands).toBeLessThanOrEqual(31);
    expect(sliderCommands).toBeGreaterThan(20);
  });

  it("trailing debounce always delivers the final slider value", () => {
    const { clock, timers, client, service } = setup();
    client.claimOperator();
    client.setSetpoint("INDEX_BASE", 1e-5);
    client.setSetpoint("INDEX_BASE", 2e-5);       // within the same tick
    client.setSetpoint("INDEX_BASE", 3e-5);
    clock.advance(MIN_COMMAND_INTERVAL_MS + 1);
    timers.flush();
    expect(service.setpoints[0]).toBeCloseTo(3e-5, 12);
  });

  it("reconnects after a drop, as an observer", () => {
    const { clock, timers, client, sockets } = setup();
    client.claimOperator();
    expect(client.store.role).toBe("operator");
    sockets[0].close();
    expect(client.store.connection).toBe("closed");
    clock.advance(501);
    timers.flush();                  // reconnect timer fires
    expect(sockets.length).toBe(2);
    sockets[1].open();
    expect(client.store.connection).toBe("open");
    expect(client.store.role).toBe("observer");
  });

  it("surfaces malformed service messages as toasts, keeps running", () => {
    const { client, sockets } = setup();
    sockets[0].onmessage?.({ data: "{nope" });
    expect(client.store.toasts.at(-1)!.text).toContain("malformed");
    client.getLibrary();
    expect(client.store.commands.size).toBeGreaterThan(0);
  });

  it("converts the replay speed dial to a wire time scale", () => {
    const { client, sockets } = setup();
    client.claimOperator();
    client.startRecord("s");
    client.stopRecord();
    client.replay("s", 2.0);         // 2x speed -> scale 0.5
    const sent = sockets[0].sent.map((raw) => JSON.parse(raw));
    const replayCmd = sent.find((m) => m.name === "replay");
    expect(replayCmd.args.scale).toBeCloseTo(0.5, 12);
  });
});
