import { describe, expect, it } from "vitest";

import { SessionClient, type LineTransport } from "../src/client.js";

class FakeTransport implements LineTransport {
  sent: string[] = [];
  private openHandler: () => void = () => {};
  private lineHandler: (line: string) => void = () => {};
  private closeHandler: () => void = () => {};

  send(line: string): void {
    this.sent.push(line);
  }
  close(): void {
    this.closeHandler();
  }
  onOpen(handler: () => void): void {
    this.openHandler = handler;
  }
  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }
  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  open(): void {
    this.openHandler();
  }
  receive(message: object): void {
    this.lineHandler(JSON.stringify(message));
  }
  drop(): void {
    this.closeHandler();
  }
}

function harness(maxReconnects: number) {
  const transports: FakeTransport[] = [];
  const scheduled: Array<{ fn: () => void; ms: number }> = [];
  const client = new SessionClient(
    () => {
      const t = new FakeTransport();
      transports.push(t);
      return t;
    },
    {
      maxReconnects,
      reconnectDelayMs: 100,
      scheduler: (fn, ms) => scheduled.push({ fn, ms }),
    },
  );
  return { client, transports, scheduled };
}

describe("session client connection handling", () => {
  it("reconnects with growing delays, then gives up visibly", () => {
    const { client, transports, scheduled } = harness(2);
    transports[0].open();
    expect(client.state.connection).toBe("connected");

    transports[0].drop();
    expect(client.state.connection).toBe("disconnected");
    expect(scheduled.map((s) => s.ms)).toEqual([100]);

    scheduled.shift()!.fn(); // first retry: connects transport #2, never opens
    transports[1].drop();
    expect(scheduled.map((s) => s.ms)).toEqual([200]); // backoff doubled

    scheduled.shift()!.fn();
    transports[2].drop(); // retries exhausted
    expect(scheduled).toHaveLength(0);
    expect(client.state.connection).toBe("disconnected");
    expect(transports).toHaveLength(3);
  });

  it("a successful reconnect restores the retry budget", () => {
    const { client, transports, scheduled } = harness(1);
    transports[0].open();
    transports[0].drop();
    scheduled.shift()!.fn();
    transports[1].open(); // back up; budget resets
    expect(client.state.connection).toBe("connected");
    transports[1].drop();
    expect(scheduled).toHaveLength(1); // allowed to retry again
  });

  it("does not reconnect after an intentional close", () => {
    const { client, transports, scheduled } = harness(3);
    transports[0].open();
    client.close();
    expect(scheduled).toHaveLength(0);
    expect(client.state.connection).toBe("disconnected");
  });

  it("in-flight requests resolve with a disconnect error on drop", async () => {
    const { client, transports } = harness(0);
    transports[0].open();
    const pending = client.step();
    transports[0].drop();
    const message = await pending;
    expect(message.type).toBe("error");
    if (message.type === "error") {
      expect(message.code).toBe("disconnected");
    }
  });

  it("terminal messages do not consume a response slot", async () => {
    const { client, transports } = harness(0);
    transports[0].open();
    const pending = client.step();
    transports[0].receive({
      type: "record",
      step: 0,
      pose: { x: 1, y: 1, heading: "N" },
      sensors: "0000",
      output: "010000",
      action: "LiftOff",
      ask_choice: null,
      terminal: "AIRBORNE",
    });
    transports[0].receive({ type: "terminal", status: "AIRBORNE" });
    const message = await pending;
    expect(message.type).toBe("record");
    expect(client.state.status).toBe("AIRBORNE");
  });
});
