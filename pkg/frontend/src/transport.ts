// Browser transport: WebSocket carrying one JSON object per message (or
// several newline-separated ones; both are split into lines here).

import type { LineTransport } from "./client.js";

export class WebSocketTransport implements LineTransport {
  private readonly socket: WebSocket;
  private lineHandler: (line: string) => void = () => {};

  constructor(url: string) {
    this.socket = new WebSocket(url);
    this.socket.onmessage = (event) => {
      const text = typeof event.data === "string" ? event.data : String(event.data);
      for (const line of text.split("\n")) {
        if (line.trim()) this.lineHandler(line);
      }
    };
  }

  send(line: string): void {
    this.socket.send(line);
  }

  close(): void {
    this.socket.close();
  }

  onOpen(handler: () => void): void {
    this.socket.onopen = () => handler();
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.socket.onclose = () => handler();
  }
}
