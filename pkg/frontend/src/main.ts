// Operator console: four panes (HMI preview, map, device & alarm board,
// aspect/assembly inspector) over the harness HTTP API and event stream.
// All state flows from /state + /stream; actions only POST.

import { ApiClient } from "./api.js";
import { actionFor } from "./actions.js";
import { buildPanel, renderPanel } from "./hmi.js";
import { ScenarioRecorder } from "./recorder.js";
import { consumeStream } from "./sse.js";
import {
  applyEvent,
  applySnapshot,
  initialViewState,
  type ViewState,
} from "./state.js";
import type { LogEvent } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

let state: ViewState = initialViewState();
let api = new ApiClient("http://127.0.0.1:8471");
const recorder = new ScenarioRecorder();
let abort: AbortController | null = null;

const MAP = { lonMin: 10.08, lonMax: 10.2, latMin: 36.78, latMax: 36.82 };

function mapToXy(lon: number, lat: number, w: number, h: number) {
  const x = ((lon - MAP.lonMin) / (MAP.lonMax - MAP.lonMin)) * w;
  const y = h - ((lat - MAP.latMin) / (MAP.latMax - MAP.latMin)) * h;
  return { x, y };
}

function render(): void {
  renderPanel(buildPanel(state.descriptor), $("hmi-panel"), (serviceId) => {
    void operate("select", {
      user_id: state.currentUser ?? userId(),
      service_id: serviceId,
    });
  });

  $("status-user").textContent = state.currentUser ?? "(nobody)";
  $("status-tick").textContent = String(state.tick);
  $("queue-depth").textContent = String(state.queueDepth);
  $("pda-state").textContent = state.devices.pda_on ? "ON" : "OFF";
  $("tv-state").textContent = state.devices.tv_on ? "ON" : "OFF";
  $("last-route").textContent = state.lastRoute
    ? `${state.lastRoute.route} via ${state.lastRoute.path.join(" > ")}`
    : "(none)";
  $("selected-service").textContent = state.selectedService ?? "(none)";

  drawMap();
  $("aspect-list").textContent = state.wovenAspects.join("\n") || "(none)";
  $<HTMLPreElement>("assembly-dump").textContent = state.assembly;

  const feed = $("feed");
  feed.innerHTML = "";
  for (const event of state.feed.slice(-40).reverse()) {
    const row = document.createElement("div");
    row.className = "feed-row";
    row.textContent = `[${event.tick}/${event.seq}] ${event.kind} ${JSON.stringify(event.data)}`;
    feed.appendChild(row);
  }
}

function drawMap(): void {
  const canvas = $<HTMLCanvasElement>("map-canvas");
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#ccc";
  for (let i = 1; i < 8; i++) {
    ctx.beginPath();
    ctx.moveTo((i * w) / 8, 0);
    ctx.lineTo((i * w) / 8, h);
    ctx.moveTo(0, (i * h) / 8);
    ctx.lineTo(w, (i * h) / 8);
    ctx.stroke();
  }
  for (const s of state.services) {
    const { x, y } = mapToXy(s.lon, s.lat, w, h);
    ctx.fillStyle = s.id_service === state.selectedService ? "#d33" : "#2a6";
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, Math.PI * 2);
    ctx.fill();
    ctx.fillStyle = "#333";
    ctx.font = "10px sans-serif";
    ctx.fillText(s.service_name, x + 7, y + 3);
  }
}

function userId(): string {
  return $<HTMLInputElement>("user-id").value || "1234";
}

async function operate(
  actionId: string,
  args: Record<string, unknown>,
): Promise<void> {
  const action = actionFor(actionId);
  try {
    const result = (await action.call(api, args)) as { tick?: number };
    recorder.record(result.tick ?? state.tick + 1, actionId, args);
    setError("");
  } catch (e) {
    setError(`${actionId}: ${(e as Error).message} (tick ${state.tick})`);
  }
}

function setError(text: string): void {
  $("error-line").textContent = text;
}

function onEvent(event: LogEvent): void {
  state = applyEvent(state, event);
  render();
}

async function connect(): Promise<void> {
  abort?.abort();
  abort = new AbortController();
  api = new ApiClient($<HTMLInputElement>("server-url").value);
  state = applySnapshot(initialViewState(), await api.state());
  const backlog = await api.log(-1);
  for (const event of backlog) state = applyEvent(state, event);
  render();
  void consumeStream(
    `${api.base}/stream?since=${state.lastSeq}`,
    (msg) => {
      if (msg.data) onEvent(JSON.parse(msg.data) as LogEvent);
    },
    abort.signal,
  ).catch((e) => setError(`stream: ${(e as Error).message}`));
}

function wireControls(): void {
  $("btn-connect").addEventListener("click", () => void connect());
  $("btn-identify").addEventListener("click", () => {
    void operate("identify", {
      user_id: userId(),
      lon: Number($<HTMLInputElement>("lon").value),
      lat: Number($<HTMLInputElement>("lat").value),
    });
  });
  $("btn-yes").addEventListener("click", () => {
    void operate("query", {
      user_id: userId(),
      category: $<HTMLInputElement>("category").value || null,
      max_km: Number($<HTMLInputElement>("max-km").value) || null,
    });
  });
  $("btn-pda").addEventListener("click", () => {
    void operate("power", { device: "pda", on: !state.devices.pda_on });
  });
  $("btn-tv").addEventListener("click", () => {
    void operate("power", { device: "tv", on: !state.devices.tv_on });
  });
  $("btn-inject").addEventListener("click", () => {
    void operate("inject", {
      source: $<HTMLInputElement>("alarm-source").value || "pump-7",
      severity: $<HTMLSelectElement>("alarm-severity").value,
      text: $<HTMLInputElement>("alarm-text").value || "alarm",
    });
  });
  $("btn-theme").addEventListener("click", () => {
    void operate("override", {
      field: "theme_color",
      value: $<HTMLInputElement>("theme-color").value || "blue",
    });
  });
  $("btn-clear-theme").addEventListener("click", () => {
    void operate("clear_override", { field: "theme_color" });
  });
  $("btn-save-scenario").addEventListener("click", () => {
    const blob = new Blob([recorder.serialize()], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "session.scn";
    a.click();
  });
  $<HTMLCanvasElement>("map-canvas").addEventListener("click", (ev) => {
    const canvas = $<HTMLCanvasElement>("map-canvas");
    const rect = canvas.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) / rect.width) * canvas.width;
    const y = ((ev.clientY - rect.top) / rect.height) * canvas.height;
    const lon = MAP.lonMin + (x / canvas.width) * (MAP.lonMax - MAP.lonMin);
    const lat = MAP.latMin + (1 - y / canvas.height) * (MAP.latMax - MAP.latMin);
    $<HTMLInputElement>("lon").value = lon.toFixed(4);
    $<HTMLInputElement>("lat").value = lat.toFixed(4);
    if (state.currentUser) {
      void operate("move", { user_id: state.currentUser, lon, lat });
    }
  });
}

wireControls();
void connect();
