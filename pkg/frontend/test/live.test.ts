// Protocol conformance against a live session service: drives the real
// Python server end to end, checks the ask dialog enables exactly the
// server-reported clear directions, and validates the finished episode's
// trace through the Python replay validator.

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import path from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { loadPlayback } from "../src/playback.js";
import { enabledDirections, canStep } from "../src/viewState.js";
import type { PoseMsg, TraceRecordMsg } from "../src/protocol.js";
import { startService, TcpTransport, REPO_DIR, type ServiceHandle } from "./helpers.js";

const TEE_MAP_PATH = path.join(REPO_DIR, "maps", "tee.map");
const TEE_MAP = readFileSync(TEE_MAP_PATH, "utf-8");

const REPLAY_VALIDATOR = `
import sys
from pathlib import Path
from qbot.session import replay

trace = replay(Path(sys.argv[1]).read_text(), map_text=Path(sys.argv[2]).read_text())
print(f"validated {len(trace.records)} records, final={trace.final_status}")
`;

let service: ServiceHandle;

beforeAll(async () => {
  service = await startService();
});

afterAll(() => {
  service?.stop();
});

function newClient(): SessionClient {
  return new SessionClient(() => new TcpTransport(service.port), { maxReconnects: 0 });
}

async function waitForConnection(client: SessionClient): Promise<void> {
  if (client.state.connection === "connected") return;
  await new Promise<void>((resolve) => {
    client.onChange((state) => {
      if (state.connection === "connected") resolve();
    });
  });
}

describe("live session protocol conformance", () => {
  it("runs a full interactive T-junction episode and replays its trace", async () => {
    const client = newClient();
    await waitForConnection(client);

    const snapshot = await client.start(TEE_MAP);
    expect(snapshot.type).toBe("state");
    expect(client.state.status).toBe("RUNNING");
    expect(canStep(client.state)).toBe(true);

    const records: TraceRecordMsg[] = [];
    const liveposes: PoseMsg[] = [];

    // step 0: single clear path ahead, the robot just drives.
    const first = await client.step();
    expect(first.type).toBe("record");
    if (first.type === "record") {
      expect(first.action).toBe("Forward");
      records.push(first);
      liveposes.push(client.state.pose!);
    }

    // step 1: the junction. The circuit asks; the dialog must enable
    // exactly the server-reported clear directions.
    const ask = await client.step();
    expect(ask.type).toBe("ask");
    if (ask.type === "ask") {
      expect(ask.clear).toEqual(["B", "L", "R"]);
    }
    expect(enabledDirections(client.state)).toEqual(["B", "L", "R"]);
    expect(enabledDirections(client.state)).not.toContain("F");
    expect(canStep(client.state)).toBe(false); // no stepping while pending

    // A blocked direction is rejected by the server and the ask stays.
    const rejected = await client.answer("F");
    expect(rejected.type).toBe("error");
    if (rejected.type === "error") {
      expect(rejected.code).toBe("invalid_choice");
    }
    expect(client.state.pendingAsk).not.toBeNull();
    expect(enabledDirections(client.state)).toEqual(["B", "L", "R"]);

    // The human picks left; the answer goes back through the circuit.
    const answered = await client.answer("L");
    expect(answered.type).toBe("record");
    if (answered.type === "record") {
      expect(answered.action).toBe("TurnLeft");
      expect(answered.ask_choice).toBe("L");
      expect(answered.terminal).toBe("GOAL");
      records.push(answered);
      liveposes.push(client.state.pose!);
    }
    expect(client.state.status).toBe("GOAL");
    expect(client.state.pendingAsk).toBeNull();
    expect(canStep(client.state)).toBe(false);

    // Persist what the UI saw and push it through the primary validator.
    const dir = mkdtempSync(path.join(tmpdir(), "qbot-ui-"));
    const tracePath = path.join(dir, "episode.jsonl");
    const lines = records.map((r) =>
      JSON.stringify({
        step: r.step,
        pose: r.pose,
        sensors: r.sensors,
        output: r.output,
        action: r.action,
        ask_choice: r.ask_choice,
        terminal: r.terminal,
      }),
    );
    writeFileSync(tracePath, lines.join("\n") + "\n");
    const output = execFileSync("python3", ["-c", REPLAY_VALIDATOR, tracePath, TEE_MAP_PATH], {
      encoding: "utf-8",
    });
    expect(output).toContain("validated 2 records");
    expect(output).toContain("final=Terminal.GOAL");

    // Live view and playback of the same trace render identical poses.
    const playback = loadPlayback(readFileSync(tracePath, "utf-8"));
    expect(playback.poseSequence()).toEqual(liveposes);

    client.close();
  });

  it("matches the checked-in golden trace byte-for-byte", async () => {
    const client = newClient();
    await waitForConnection(client);
    await client.start(TEE_MAP);
    const records: TraceRecordMsg[] = [];
    const first = await client.step();
    if (first.type === "record") records.push(first);
    await client.step();
    const answered = await client.answer("L");
    if (answered.type === "record") records.push(answered);
    const lines = records.map((r) =>
      JSON.stringify({
        step: r.step,
        pose: r.pose,
        sensors: r.sensors,
        output: r.output,
        action: r.action,
        ask_choice: r.ask_choice,
        terminal: r.terminal,
      }),
    );
    const golden = readFileSync(path.join(REPO_DIR, "tests", "goldens", "tee.jsonl"), "utf-8");
    expect(lines.join("\n") + "\n").toBe(golden);
    client.close();
  });

  it("surfaces protocol errors without corrupting the view", async () => {
    const client = newClient();
    await waitForConnection(client);
    const err = await client.step(); // no episode started yet
    expect(err.type).toBe("error");
    if (err.type === "error") {
      expect(err.code).toBe("state");
    }
    expect(client.state.status).toBe("IDLE");
    client.close();
  });

  it("re-syncs from a state snapshot on request", async () => {
    const client = newClient();
    await waitForConnection(client);
    await client.start(TEE_MAP);
    await client.step();
    await client.step(); // now pending ask
    const snapshot = await client.requestState();
    expect(snapshot.type).toBe("state");
    if (snapshot.type === "state") {
      expect(snapshot.pending?.clear).toEqual(["B", "L", "R"]);
      expect(snapshot.last_record?.action).toBe("Forward");
    }
    expect(enabledDirections(client.state)).toEqual(["B", "L", "R"]);
    client.close();
  });
});
