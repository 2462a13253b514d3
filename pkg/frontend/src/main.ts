// Browser wiring: pointer capture -> session frames; pen frames -> canvas.

import { SessionClient } from "./client.js";
import { isErrorFrame, isPenFrame, SessionFrame } from "./protocol.js";
import { renderScene, SceneState } from "./render.js";
import { TraceBuffer } from "./tracebuf.js";
import { DEFAULT_SHEET, ViewTransform } from "./transform.js";

const SEND_INTERVAL_MS = 1000 / 60;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d")!;
  const banner = el<HTMLDivElement>("banner");
  const tremorBox = el<HTMLInputElement>("tremor");
  const b1Slider = el<HTMLInputElement>("b1");
  const b2Slider = el<HTMLInputElement>("b2");
  const b1Label = el<HTMLSpanElement>("b1-value");
  const b2Label = el<HTMLSpanElement>("b2-value");

  const view = new ViewTransform(canvas.width, canvas.height, DEFAULT_SHEET);
  const rawTrace = new TraceBuffer();
  const penTrace = new TraceBuffer();
  const state: SceneState = {
    raw: [], pen: [], connected: false, tremorOn: false,
  };

  const url = new URLSearchParams(location.search).get("ws")
    ?? `ws://${location.hostname || "localhost"}:7342/`;
  const epoch = performance.now();
  let drawing = false;
  let lastSent = -Infinity;
  let pendingParams: { b1?: number; b2?: number } | null = null;

  const client = new SessionClient(url, {
    onFrame(frame) {
      if (isPenFrame(frame)) {
        rawTrace.push({ t: frame.t, x: frame.raw_x, y: frame.raw_y });
        penTrace.push({ t: frame.t, x: frame.pen_x, y: frame.pen_y });
        state.latest = frame;
      } else if (isErrorFrame(frame)) {
        banner.textContent = `server: ${frame.error}`;
      }
    },
    onOpen() {
      state.connected = true;
      banner.textContent = "";
    },
    onClose() {
      state.connected = false;
      drawing = false;
      banner.textContent = "disconnected — input disabled";
    },
  });
  client.connect();

  function sendPointer(ev: PointerEvent, force = false): void {
    if (!state.connected || !drawing) return;
    const now = performance.now();
    if (!force && now - lastSent < SEND_INTERVAL_MS) return;
    lastSent = now;
    const rect = canvas.getBoundingClientRect();
    const [x, y] = view.toMeters(ev.clientX - rect.left, ev.clientY - rect.top);
    const frame: SessionFrame = {
      t: (now - epoch) / 1000,
      x, y,
      tremor_on: tremorBox.checked,
    };
    if (pendingParams) {
      frame.set_params = pendingParams;
      pendingParams = null;
    }
    client.send(frame);
  }

  canvas.addEventListener("pointerdown", (ev) => {
    drawing = true;
    canvas.setPointerCapture(ev.pointerId);
    sendPointer(ev, true);
  });
  canvas.addEventListener("pointermove", (ev) => sendPointer(ev));
  const stop = () => { drawing = false; };
  canvas.addEventListener("pointerup", stop);
  canvas.addEventListener("pointercancel", stop);

  function sliderValue(slider: HTMLInputElement): number {
    // slider is log10(b) in [-3, 0]
    return Math.pow(10, Number(slider.value));
  }

  function updateLabels(): void {
    b1Label.textContent = sliderValue(b1Slider).toFixed(3);
    b2Label.textContent = sliderValue(b2Slider).toFixed(3);
  }

  b1Slider.addEventListener("input", () => {
    pendingParams = { ...(pendingParams ?? {}), b1: sliderValue(b1Slider) };
    updateLabels();
  });
  b2Slider.addEventListener("input", () => {
    pendingParams = { ...(pendingParams ?? {}), b2: sliderValue(b2Slider) };
    updateLabels();
  });
  updateLabels();

  function frame(): void {
    state.raw = rawTrace.toArray();
    state.pen = penTrace.toArray();
    state.tremorOn = tremorBox.checked;
    renderScene(ctx, view, canvas.width, canvas.height, state);
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

window.addEventListener("DOMContentLoaded", main);
