/**
 * Integration against the real session service: spawn `pneumahand serve`,
 * connect over a real websocket, and run the acceptance path end to end.
 * Requires the Python package to be installed (see repository README).
 */

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { SessionClient, type SocketLike } from "../src/client.js";

const PORT = 8791;
let server: ChildProcess;

function wsFactory(): SocketLike {
  const ws = new WebSocket(`ws://127.0.0.1:${PORT}`);
  const like: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.on("open", () => like.onopen?.());
  ws.on("message", (data) => like.onmessage?.({ data: data.toString() }));
  ws.on("close", () => like.onclose?.());
  return like;
}

async function until(
  predicate: () => boolean,
  timeoutMs = 20_000,
  label = "condition",
): Promise<void> {
  const start = Date.now();
  while (!predicate()) {
    if (Date.now() - start > timeoutMs) throw new Error(`timeout waiting for ${label}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

beforeAll(async () => {
  server = spawn("pneumahand", ["serve", "--port", String(PORT)], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  // wait until the port accepts a socket
  await until(() => server.exitCode === null, 1000, "server process");
  await new Promise((r) => setTimeout(r, 2500));
}, 30_000);

afterAll(() => {
  server?.kill("SIGINT");
});

describe("against the live service", () => {
  it("claims, slides, sees the setpoint echoed within two frames", async () => {
    const client = new SessionClient({ socketFactory: wsFactory });
    client.connect();
    await until(() => client.store.connection === "open", 20_000, "connection");
    client.claimOperator();
    await until(() => client.store.role === "operator", 20_000, "operator role");
    await until(() => client.store.frame !== null, 20_000, "first frame");

    const before = client.store.frame!;
    const target = before.mass[0] * 1.5;
    const tickBefore = before.tick;
    client.setSetpoint("INDEX_BASE", target);
    await until(
      () => Math.abs((client.store.frame?.setpoint[0] ?? 0) - target) < 1e-15,
      20_000,
      "setpoint echo",
    );
    const framesElapsed = (client.store.frame!.tick - tickBefore) / 10;
    expect(framesElapsed).toBeLessThanOrEqual(2 + 1);  // +1 for in-flight frame

    // the library is browsable over the wire
    client.getLibrary();
    await until(() => client.store.libraryEntries.length >= 46, 20_000, "library");
    expect(client.store.libraryEntries).toContain("power_sphere");

    // a second connection cannot claim the role
    const second = new SessionClient({ socketFactory: wsFactory });
    second.connect();
    await until(() => second.store.connection === "open", 20_000, "second connection");
    second.claimOperator();
    await until(() => second.store.hasRoleConflict(), 20_000, "role conflict");
    expect(second.store.role).toBe("observer");

    client.disconnect();
    second.disconnect();
  }, 60_000);
});
