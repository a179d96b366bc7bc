import { describe, expect, it } from "vitest";

import { decode, ProtocolError } from "../src/protocol.js";
import { ACK_TIMEOUT_MS, SessionStore, STALE_AFTER_MS } from "../src/store.js";
import { FakeService } from "./helpers.js";

describe("protocol decoding", () => {
  it("rejects unknown wire versions", () => {
    expect(() => decode(JSON.stringify({ v: 99, type: "telemetry" })))
      .toThrow(ProtocolError);
  });

  it("rejects garbage and unknown types", () => {
    expect(() => decode("{oops")).toThrow("malformed");
    expect(() => decode(JSON.stringify({ v: 1, type: "surprise" })))
      .toThrow("malformed");
  });

  it("accepts service telemetry", () => {
    const frame = new FakeService().frame();
    const decoded = decode(JSON.stringify(frame));
    expect(decoded.type).toBe("telemetry");
  });
});

describe("session store", () => {
  it("every readout value comes verbatim from the last frame", () => {
    const store = new SessionStore();
    const frame = new FakeService().frame();
    store.apply(frame, 0);
    expect(store.frame).toBe(frame);
    expect(store.frame!.mass).toEqual(frame.mass);
    expect(store.mode).toBe(frame.mode);
  });

  it("flags stale data after one second without frames", () => {
    const store = new SessionStore();
    store.apply(new FakeService().frame(), 1000);
    expect(store.isStale(1000 + STALE_AFTER_MS)).toBe(false);
    expect(store.isStale(1001 + STALE_AFTER_MS)).toBe(true);
  });

  it("correlates acks and errors with pending commands", () => {
    const store = new SessionStore();
    store.commandSent(7, "replay", 0);
    store.apply({ v: 1, type: "error", id: 7, status: "error",
                  code: "unknown-entry", detail: "no library entry 'x'" }, 5);
    const cmd = store.commands.get(7)!;
    expect(cmd.status).toBe("error");
    expect(store.toasts.at(-1)!.text).toContain("unknown-entry");
  });

  it("times out unacknowledged commands visibly at 2 s", () => {
    const store = new SessionStore();
    store.commandSent(1, "set_setpoint", 0);
    expect(store.markTimeouts(ACK_TIMEOUT_MS)).toBe(false);
    expect(store.markTimeouts(ACK_TIMEOUT_MS + 1)).toBe(true);
    expect(store.commands.get(1)!.status).toBe("timeout");
    expect(store.toasts.at(-1)!.text).toContain("not acknowledged");
  });

  it("tracks the operator role through claim and release acks", () => {
    const store = new SessionStore();
    store.commandSent(1, "claim_operator", 0);
    store.apply({ v: 1, type: "ack", id: 1, status: "ok",
                  detail: { role: "operator" } }, 1);
    expect(store.role).toBe("operator");
    store.commandSent(2, "release_operator", 2);
    store.apply({ v: 1, type: "ack", id: 2, status: "ok" }, 3);
    expect(store.role).toBe("observer");
  });

  it("losing the connection demotes to observer", () => {
    const store = new SessionStore();
    store.role = "operator";
    store.setConnection("closed");
    expect(store.role).toBe("observer");
  });
});
