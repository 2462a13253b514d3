// Wire types and framing for the gripscribe session protocol:
// newline-delimited JSON, one frame per line, over a socket.

export const PROTOCOL_NAME = "gripscribe";
export const PROTOCOL_VERSION = 1;

export interface SessionFrame {
  t: number;          // client clock [s]
  x: number;          // pointer target in sheet coordinates [m]
  y: number;
  tremor_on: boolean;
  set_params?: { b1?: number; b2?: number };
}

export interface PenFrame {
  t: number;          // server sim clock [s]
  pen_x: number;      // stabilized pen position [m]
  pen_y: number;
  raw_x: number;      // tremor-augmented target fed to the dynamics [m]
  raw_y: number;
  theta1: number;     // bar angles [rad]
  psi2: number;
  dissipated: number; // cumulative damper loss [J]
  lag?: boolean;
}

export interface ErrorFrame {
  error: string;
  line?: number;
}

export interface HelloFrame {
  hello: string;
  version: number;
}

export type InboundFrame = PenFrame | ErrorFrame | HelloFrame;

export function isPenFrame(f: InboundFrame): f is PenFrame {
  return typeof (f as PenFrame).pen_x === "number";
}

export function isErrorFrame(f: InboundFrame): f is ErrorFrame {
  return typeof (f as ErrorFrame).error === "string";
}

export function isHelloFrame(f: InboundFrame): f is HelloFrame {
  return typeof (f as HelloFrame).hello === "string";
}

export function encodeFrame(frame: object): string {
  return JSON.stringify(frame) + "\n";
}

export function clientHello(): string {
  return encodeFrame({ hello: "gripscribe-ui", version: PROTOCOL_VERSION });
}

/** Reassembles newline-delimited JSON from arbitrary chunk boundaries. */
export class NdjsonDecoder {
  private buffer = "";

  push(chunk: string): InboundFrame[] {
    this.buffer += chunk;
    const out: InboundFrame[] = [];
    for (;;) {
      const nl = this.buffer.indexOf("\n");
      if (nl < 0) break;
      const line = this.buffer.slice(0, nl).trim();
      this.buffer = this.buffer.slice(nl + 1);
      if (!line) continue;
      try {
        out.push(JSON.parse(line) as InboundFrame);
      } catch {
        // a malformed server line is not recoverable client-side; surface it
        out.push({ error: `unparseable frame: ${line.slice(0, 80)}` });
      }
    }
    return out;
  }
}
