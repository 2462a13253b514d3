// WebSocket session client.  The browser cannot open plain TCP sockets, so
// it speaks the NDJSON protocol through the ws<->tcp gateway
// (gateway/gateway.mjs); the frames themselves are identical on both hops.

import {
  InboundFrame, NdjsonDecoder, SessionFrame, clientHello, encodeFrame,
  isHelloFrame, PROTOCOL_VERSION,
} from "./protocol.js";

export interface SessionHandlers {
  onFrame(frame: InboundFrame): void;
  onOpen(): void;
  onClose(): void;
}

export class SessionClient {
  private ws: WebSocket | null = null;
  private decoder = new NdjsonDecoder();
  private ready = false;

  constructor(private url: string, private handlers: SessionHandlers) {}

  connect(): void {
    this.ws = new WebSocket(this.url);
    this.ws.onmessage = (ev) => {
      for (const frame of this.decoder.push(String(ev.data))) {
        if (isHelloFrame(frame)) {
          if (frame.version !== PROTOCOL_VERSION) {
            this.ws?.close();
            return;
          }
          this.ws?.send(clientHello());
          this.ready = true;
          this.handlers.onOpen();
          continue;
        }
        this.handlers.onFrame(frame);
      }
    };
    this.ws.onclose = () => {
      this.ready = false;
      this.handlers.onClose();
    };
    this.ws.onerror = () => {
      // onclose follows and reports the disconnect
    };
  }

  get connected(): boolean {
    return this.ready && this.ws?.readyState === WebSocket.OPEN;
  }

  send(frame: SessionFrame): void {
    if (this.connected) this.ws!.send(encodeFrame(frame));
  }

  close(): void {
    this.ws?.close();
  }
}
