// Session client over any line transport (WebSocket in the browser, raw TCP
// in tests). The protocol is strictly request -> response(s): every command
// gets exactly one record/ask/state/error back, with an extra terminal
// message after a terminal record, so responses resolve in FIFO order.

import {
  parseServerMessage,
  serializeClientMessage,
  type ClientMessage,
  type DirectionLetter,
  type ServerMessage,
} from "./protocol.js";
import {
  applyServerMessage,
  initialViewState,
  setConnection,
  type ViewState,
} from "./viewState.js";

export interface LineTransport {
  send(line: string): void;
  close(): void;
  onOpen(handler: () => void): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
}

export type TransportFactory = () => LineTransport;

export interface SessionClientOptions {
  maxReconnects?: number; // bounded backoff; no silent retrying beyond it
  reconnectDelayMs?: number;
  scheduler?: (fn: () => void, ms: number) => void;
}

export class SessionClient {
  state: ViewState = initialViewState;

  private transport: LineTransport | null = null;
  private readonly factory: TransportFactory;
  private readonly listeners: Array<(state: ViewState) => void> = [];
  private readonly pending: Array<(message: ServerMessage) => void> = [];
  private readonly maxReconnects: number;
  private readonly reconnectDelayMs: number;
  private readonly scheduler: (fn: () => void, ms: number) => void;
  private reconnectsLeft: number;
  private closedByUs = false;

  constructor(factory: TransportFactory, options: SessionClientOptions = {}) {
    this.factory = factory;
    this.maxReconnects = options.maxReconnects ?? 3;
    this.reconnectDelayMs = options.reconnectDelayMs ?? 500;
    this.scheduler = options.scheduler ?? ((fn, ms) => setTimeout(fn, ms));
    this.reconnectsLeft = this.maxReconnects;
    this.connect();
  }

  onChange(listener: (state: ViewState) => void): void {
    this.listeners.push(listener);
  }

  close(): void {
    this.closedByUs = true;
    this.transport?.close();
  }

  start(map: string, maxSteps?: number): Promise<ServerMessage> {
    const message: ClientMessage =
      maxSteps === undefined ? { type: "start", map } : { type: "start", map, max_steps: maxSteps };
    return this.request(message);
  }

  step(): Promise<ServerMessage> {
    return this.request({ type: "step" });
  }

  answer(direction: DirectionLetter): Promise<ServerMessage> {
    return this.request({ type: "answer", direction });
  }

  requestState(): Promise<ServerMessage> {
    return this.request({ type: "state" });
  }

  private request(message: ClientMessage): Promise<ServerMessage> {
    if (!this.transport) return Promise.reject(new Error("disconnected"));
    const line = serializeClientMessage(message);
    return new Promise((resolve) => {
      this.pending.push(resolve);
      this.transport!.send(line);
    });
  }

  private connect(): void {
    const transport = this.factory();
    this.transport = transport;
    transport.onOpen(() => {
      this.reconnectsLeft = this.maxReconnects;
      this.update(setConnection(this.state, "connected"));
    });
    transport.onLine((line) => this.handleLine(line));
    transport.onClose(() => {
      this.transport = null;
      this.update(setConnection(this.state, "disconnected"));
      while (this.pending.length) {
        this.pending.shift()!({
          type: "error",
          code: "disconnected",
          message: "connection closed",
        });
      }
      if (!this.closedByUs && this.reconnectsLeft > 0) {
        const attempt = this.maxReconnects - this.reconnectsLeft;
        this.reconnectsLeft -= 1;
        this.scheduler(() => this.connect(), this.reconnectDelayMs * 2 ** attempt);
      }
    });
  }

  private handleLine(line: string): void {
    const message = parseServerMessage(line);
    this.update(applyServerMessage(this.state, message));
    if (message.type !== "terminal") {
      // terminal trails its record and consumes no response slot
      this.pending.shift()?.(message);
    }
  }

  private update(state: ViewState): void {
    this.state = state;
    for (const listener of this.listeners) listener(state);
  }
}
