// Canvas renderer.  Draws only what PenFrames carry: the UI never computes
// physics — pen points, bar angles, and the energy readout all come off the
// wire.  The context parameter is the 2D-context subset the renderer needs,
// so tests can substitute a recording mock.

import { PenFrame } from "./protocol.js";
import { TracePoint } from "./tracebuf.js";
import { ViewTransform } from "./transform.js";

export interface Canvas2DLike {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
}

export interface MechanismSketch {
  l1: number;     // [m]
  l2: number;     // [m]
  baseX: number;  // [m]
  baseY: number;
}

export const DEFAULT_MECHANISM: MechanismSketch = {
  l1: 0.25,
  l2: 0.25,
  baseX: 0.0,
  baseY: 0.0,
};

export interface SceneState {
  raw: TracePoint[];
  pen: TracePoint[];
  latest?: PenFrame;
  connected: boolean;
  tremorOn: boolean;
}

function polyline(ctx: Canvas2DLike, view: ViewTransform, pts: TracePoint[],
                  style: string, width: number): void {
  if (pts.length < 2) return;
  ctx.strokeStyle = style;
  ctx.lineWidth = width;
  ctx.beginPath();
  const [x0, y0] = view.toPx(pts[0].x, pts[0].y);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < pts.length; i++) {
    const [x, y] = view.toPx(pts[i].x, pts[i].y);
    ctx.lineTo(x, y);
  }
  ctx.stroke();
}

function dot(ctx: Canvas2DLike, view: ViewTransform, xM: number, yM: number,
             rPx: number, style: string): void {
  const [x, y] = view.toPx(xM, yM);
  ctx.fillStyle = style;
  ctx.beginPath();
  ctx.arc(x, y, rPx, 0, 2 * Math.PI);
  ctx.fill();
}

export function renderScene(ctx: Canvas2DLike, view: ViewTransform,
                            width: number, height: number, state: SceneState,
                            mech: MechanismSketch = DEFAULT_MECHANISM): void {
  ctx.clearRect(0, 0, width, height);

  // sheet outline
  const [left, top] = view.toPx(view.sheet.centerX - view.sheet.width / 2,
                                view.sheet.centerY + view.sheet.height / 2);
  ctx.strokeStyle = "#888888";
  ctx.lineWidth = 1;
  ctx.strokeRect(left, top, view.sheet.width / view.metersPerPixel,
                 view.sheet.height / view.metersPerPixel);

  // raw target trace (light) under the stabilized pen trace (dark)
  polyline(ctx, view, state.raw, "#d4a3a3", 1);
  polyline(ctx, view, state.pen, "#1d2e4f", 2);

  // linkage skeleton from the reported bar angles
  const f = state.latest;
  if (f) {
    const elbowX = mech.baseX + mech.l1 * Math.cos(f.theta1);
    const elbowY = mech.baseY + mech.l1 * Math.sin(f.theta1);
    ctx.strokeStyle = "#6c8ebf";
    ctx.lineWidth = 2;
    ctx.beginPath();
    const [bx, by] = view.toPx(mech.baseX, mech.baseY);
    ctx.moveTo(bx, by);
    const [ex, ey] = view.toPx(elbowX, elbowY);
    ctx.lineTo(ex, ey);
    // the distal endpoint is drawn from the same PenFrame as the trace head
    const [px, py] = view.toPx(f.pen_x, f.pen_y);
    ctx.lineTo(px, py);
    ctx.stroke();
    dot(ctx, view, mech.baseX, mech.baseY, 4, "#6c8ebf");
    dot(ctx, view, elbowX, elbowY, 3, "#6c8ebf");
    dot(ctx, view, f.pen_x, f.pen_y, 3, "#1d2e4f");

    ctx.fillStyle = "#333333";
    ctx.font = "12px sans-serif";
    ctx.fillText(`dissipated ${(f.dissipated * 1000).toFixed(1)} mJ`, 8, 16);
    if (f.lag) ctx.fillText("lag", 8, 32);
  }

  if (!state.connected) {
    ctx.fillStyle = "#aa2222";
    ctx.font = "14px sans-serif";
    ctx.fillText("disconnected — input disabled", 8, height - 10);
  } else if (state.tremorOn) {
    ctx.fillStyle = "#777777";
    ctx.font = "12px sans-serif";
    ctx.fillText("tremor on", 8, height - 10);
  }
}
