import { GatewayClient } from "./client.js";
import { goalForClick } from "./controller.js";
import {
  COMMAND_PERIOD_MS,
  KeyboardTracker,
  TeleopCadence,
  gamepadToSample,
  keysToSample,
} from "./input.js";
import { decodeRuns } from "./map.js";
import { Renderer } from "./renderer.js";
import {
  applyMessage,
  initialState,
  setConnection,
  type Notification,
  type ViewState,
} from "./store.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const gauge = document.getElementById("gauge") as HTMLCanvasElement;
const loaEl = document.getElementById("loa")!;
const statusEl = document.getElementById("status")!;
const toastsEl = document.getElementById("toasts")!;
const switchBtn = document.getElementById("switch-btn")!;

let state: ViewState = initialState();
let mapCells: Uint8Array | undefined;
const renderer = new Renderer(canvas);

function toast(note: Notification): void {
  const li = document.createElement("li");
  li.className = note.kind;
  li.textContent = note.text;
  toastsEl.prepend(li);
  setTimeout(() => li.remove(), 6000);
}

const wsUrl = new URLSearchParams(location.search).get("ws") ??
  `ws://${location.hostname || "127.0.0.1"}:8750`;

const client = new GatewayClient(wsUrl, {
  onMessage(msg) {
    const applied = applyMessage(state, msg);
    state = applied.state;
    if (msg.type === "map") mapCells = decodeRuns(msg);
    applied.notes.forEach(toast);
  },
  onStatus(status) {
    state = setConnection(state, status);
    statusEl.textContent = status;
    statusEl.className = status;
  },
});
client.connect();

// teleop cadence: fixed 10 Hz, independent of the render loop
const keyboard = new KeyboardTracker();
keyboard.attach(window);
const cadence = new TeleopCadence();
setInterval(() => {
  let sample = keysToSample(keyboard.pressed);
  const pads = navigator.getGamepads ? navigator.getGamepads() : [];
  const pad = pads.find((p) => p !== null);
  if (pad && sample.forward === 0 && sample.turn === 0) {
    sample = gamepadToSample(pad.axes);
  }
  const cmd = cadence.next(sample);
  if (cmd) client.send(cmd);
}, COMMAND_PERIOD_MS);

canvas.addEventListener("click", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const px = (ev.clientX - rect.left) * (canvas.width / rect.width);
  const py = (ev.clientY - rect.top) * (canvas.height / rect.height);
  const click = goalForClick(state.map, renderer.transform, px, py, mapCells);
  if (!click) return;
  if (click.warning) toast({ kind: "info", text: click.warning });
  client.send(click.cmd);
});

switchBtn.addEventListener("click", () => client.send({ type: "switchLoa" }));

function frameLoop(): void {
  renderer.draw(state);
  renderer.drawErrorGauge(gauge, state);
  const frame = state.frame;
  loaEl.textContent = frame
    ? `${frame.loa.toUpperCase()} · ${frame.controlMode} · t=${frame.t.toFixed(1)}s`
    : "waiting for frames";
  loaEl.className = frame ? frame.loa : "";
  requestAnimationFrame(frameLoop);
}
requestAnimationFrame(frameLoop);
