// Gateway connection with automatic reconnect. The view is stateless with
// respect to the world: after a reconnect the map message and the next
// frame rebuild everything.

import { parseServerMsg, type ClientCmd, type ServerMsg } from "./protocol.js";

export interface ClientCallbacks {
  onMessage(msg: ServerMsg): void;
  onStatus(status: "connecting" | "connected" | "closed"): void;
}

export class GatewayClient {
  private socket: WebSocket | null = null;
  private closed = false;
  private retryMs = 500;

  constructor(private readonly url: string,
              private readonly callbacks: ClientCallbacks) {}

  connect(): void {
    this.callbacks.onStatus("connecting");
    const socket = new WebSocket(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.retryMs = 500;
      this.callbacks.onStatus("connected");
    };
    socket.onmessage = (ev) => {
      const msg = parseServerMsg(String(ev.data));
      if (msg) this.callbacks.onMessage(msg);
    };
    socket.onclose = () => {
      this.callbacks.onStatus("closed");
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 5000);
      }
    };
    socket.onerror = () => socket.close();
  }

  send(cmd: ClientCmd): boolean {
    if (this.socket && this.socket.readyState === WebSocket.OPEN) {
      this.socket.send(JSON.stringify(cmd));
      return true;
    }
    return false;
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }
}
