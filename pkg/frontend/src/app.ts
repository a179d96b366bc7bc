/**
 * DOM assembly for the mixing board. Everything here is presentation: the
 * store holds state, the client talks to the service, and this file just
 * keeps the document in sync. Only this module touches the DOM.
 */

import { SessionClient, type SocketLike } from "./client.js";
import { CHANNELS, GROUP_ORDER } from "./channels.js";
import { RecordReplayPanel } from "./panel.js";
import { allSideViews, kapandjiMarkers, spreadView } from "./schematic.js";
import { SliderScale, stripStates } from "./strips.js";

const SERVICE_URL =
  new URLSearchParams(location.search).get("service") ?? "ws://127.0.0.1:8765";

const client = new SessionClient({
  socketFactory: () => new WebSocket(SERVICE_URL) as unknown as SocketLike,
});
const store = client.store;
const panel = new RecordReplayPanel(client);
const scale = new SliderScale();

const root = document.getElementById("board")!;
root.innerHTML = `
  <header>
    <span id="conn" class="badge"></span>
    <span id="role" class="badge"></span>
    <span id="mode" class="badge"></span>
    <span id="stale" class="badge warn" hidden>no telemetry</span>
    <span id="clients" class="badge"></span>
  </header>
  <section id="strips"></section>
  <section id="schematic">
    <svg id="side" viewBox="-10 -90 140 100" width="280"></svg>
    <svg id="spread" viewBox="-60 -40 120 50" width="240"></svg>
    <div id="kapandji"></div>
  </section>
  <section id="panelbox">
    <button id="claim">claim operator</button>
    <button id="release">release</button>
    <input id="recname" placeholder="synergy name" />
    <button id="record">record</button>
    <button id="stoprecord">stop</button>
    <select id="library"></select>
    <input id="speed" type="range" min="0.25" max="4" step="0.25" value="1" />
    <span id="speedlabel">1x</span>
    <button id="replay">replay</button>
  </section>
  <ul id="toasts"></ul>
`;

const stripsBox = document.getElementById("strips")!;
const sliders = new Map<number, HTMLInputElement>();
const readouts = new Map<number, HTMLElement>();

for (const group of GROUP_ORDER) {
  const groupBox = document.createElement("div");
  groupBox.className = "group";
  groupBox.dataset.group = group;
  for (const ch of CHANNELS.filter((c) => c.group === group)) {
    const strip = document.createElement("div");
    strip.className = "strip";
    strip.innerHTML = `
      <label>${ch.label}</label>
      <input type="range" min="0" max="1000" value="0" orient="vertical" />
      <small class="readout"></small>
    `;
    const slider = strip.querySelector("input")!;
    slider.addEventListener("input", () => {
      if (store.role !== "operator" || store.mode === "replaying") return;
      client.setSetpoint(ch.name, scale.mass(ch.code, Number(slider.value) / 1000));
    });
    sliders.set(ch.code, slider);
    readouts.set(ch.code, strip.querySelector(".readout")!);
    groupBox.appendChild(strip);
  }
  stripsBox.appendChild(groupBox);
}

document.getElementById("claim")!.addEventListener("click", () => client.claimOperator());
document.getElementById("release")!.addEventListener("click", () => client.releaseOperator());
document.getElementById("record")!.addEventListener("click", () => {
  const name = (document.getElementById("recname") as HTMLInputElement).value.trim();
  if (name) panel.beginRecord(name);
});
document.getElementById("stoprecord")!.addEventListener("click", () => panel.endRecord());
const speedInput = document.getElementById("speed") as HTMLInputElement;
speedInput.addEventListener("input", () => {
  panel.setSpeed(Number(speedInput.value));
  document.getElementById("speedlabel")!.textContent = `${panel.speed}x`;
});
document.getElementById("replay")!.addEventListener("click", () => {
  const entry = (document.getElementById("library") as HTMLSelectElement).value;
  if (entry) panel.replay(entry);
});

function render(): void {
  const frame = store.frame;
  document.getElementById("conn")!.textContent = store.connection;
  document.getElementById("role")!.textContent = store.role;
  document.getElementById("mode")!.textContent = store.mode;
  document.getElementById("clients")!.textContent = frame ? `${frame.clients} client(s)` : "";
  (document.getElementById("stale") as HTMLElement).hidden = !store.isStale(Date.now());

  const operatorFree = store.role === "operator" && store.mode !== "replaying";
  for (const state of stripStates(frame, scale)) {
    const slider = sliders.get(state.channel.code)!;
    const readout = readouts.get(state.channel.code)!;
    slider.disabled = !operatorFree;
    // during replay (and for observers) sliders animate with the setpoints
    if (!operatorFree || document.activeElement !== slider) {
      slider.value = String(Math.round(state.sliderFraction * 1000));
    }
    readout.textContent =
      `${(state.setpointKg * 1e6).toFixed(1)} mg | ${state.pressureKpa.toFixed(0)} kPa | ` +
      `${state.jointDeg.toFixed(0)} deg`;
  }

  if (frame) {
    panel.observe(frame);
    const side = document.getElementById("side")!;
    side.innerHTML = allSideViews(frame)
      .map((trace) => {
        const d = trace.points.map(([x, y], i) => `${i ? "L" : "M"}${x},${-y}`).join(" ");
        return `<path d="${d}" fill="none" stroke="#333" data-digit="${trace.digit}"/>`;
      })
      .join("");
    const spread = document.getElementById("spread")!;
    spread.innerHTML = spreadView(frame)
      .map(({ digit, angleDeg }) => {
        const a = ((angleDeg - 90) * Math.PI) / 180;
        return `<line x1="0" y1="0" x2="${35 * Math.cos(a)}" y2="${35 * Math.sin(a)}" ` +
          `stroke="#555" data-digit="${digit}"/>`;
      })
      .join("");
    document.getElementById("kapandji")!.innerHTML = kapandjiMarkers(frame)
      .map((m) => `<span class="target ${m.touched ? "touched" : ""}">${m.index}</span>`)
      .join("");
  }

  const toasts = document.getElementById("toasts")!;
  toasts.innerHTML = store.toasts
    .slice(-5)
    .map((t) => `<li class="${t.kind}">${t.text}</li>`)
    .join("");

  const librarySelect = document.getElementById("library") as HTMLSelectElement;
  const options = store.libraryEntries.map((e) => `<option>${e}</option>`).join("");
  if (librarySelect.innerHTML !== options) librarySelect.innerHTML = options;
}

store.subscribe(render);
setInterval(() => {
  client.tick();
  render();
}, 100);

client.connect();
client.getLibrary();
render();
