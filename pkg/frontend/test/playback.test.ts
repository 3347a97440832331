import { readFileSync } from "node:fs";
import path from "node:path";

import { describe, expect, it } from "vitest";

import { loadPlayback, parseTrace, TraceParseError } from "../src/playback.js";
import { REPO_DIR } from "./helpers.js";

const GOLDENS = path.join(REPO_DIR, "tests", "goldens");

function golden(name: string): string {
  return readFileSync(path.join(GOLDENS, name), "utf-8");
}

// A corridor walk ending in lift-off; poses chain Forward x3 into a pocket.
const CORRIDOR_4 = [
  '{"step":0,"pose":{"x":1,"y":1,"heading":"E"},"sensors":"1000","output":"000101","action":"Forward","ask_choice":null,"terminal":null}',
  '{"step":1,"pose":{"x":2,"y":1,"heading":"E"},"sensors":"1100","output":"000101","action":"Forward","ask_choice":"F","terminal":null}',
  '{"step":2,"pose":{"x":3,"y":1,"heading":"E"},"sensors":"1100","output":"000101","action":"Forward","ask_choice":"F","terminal":null}',
  '{"step":3,"pose":{"x":4,"y":1,"heading":"E"},"sensors":"0000","output":"010000","action":"LiftOff","ask_choice":null,"terminal":"AIRBORNE"}',
].join("\n") + "\n";

describe("trace playback", () => {
  it("scrubs a four-record corridor trace ending airborne", () => {
    const playback = loadPlayback(CORRIDOR_4);
    expect(playback.length).toBe(4);
    expect(playback.finalStatus()).toBe("AIRBORNE");
    expect(playback.frame(0).poseAfter).toEqual({ x: 2, y: 1, heading: "E" });
    expect(playback.frame(2).poseAfter).toEqual({ x: 4, y: 1, heading: "E" });
    const last = playback.frame(3);
    expect(last.terminal).toBe("AIRBORNE");
    expect(last.poseAfter).toEqual(last.poseBefore); // lift-off stays in place
  });

  it("chains poses frame to frame", () => {
    const playback = loadPlayback(CORRIDOR_4);
    for (let i = 0; i + 1 < playback.length; i++) {
      expect(playback.frame(i + 1).poseBefore).toEqual(playback.frame(i).poseAfter);
    }
  });

  it("loads the checked-in goal trace with its ask badge", () => {
    const playback = loadPlayback(golden("goal.jsonl"));
    expect(playback.length).toBe(2);
    expect(playback.frame(0).askChoice).toBeNull();
    expect(playback.frame(1).askChoice).toBe("F");
    expect(playback.finalStatus()).toBe("GOAL");
  });

  it("loads the tee trace and ends on the goal cell", () => {
    const playback = loadPlayback(golden("tee.jsonl"));
    expect(playback.frame(playback.length - 1).poseAfter).toEqual({ x: 1, y: 1, heading: "W" });
    expect(playback.finalStatus()).toBe("GOAL");
  });

  it("an empty trace is empty, not an error", () => {
    const playback = loadPlayback("");
    expect(playback.isEmpty).toBe(true);
    expect(playback.finalStatus()).toBeNull();
  });

  it("reports the failing line for malformed JSON", () => {
    const text = golden("goal.jsonl") + "{broken\n";
    try {
      parseTrace(text);
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(TraceParseError);
      expect((err as TraceParseError).line).toBe(3);
      expect(String(err)).toContain("line 3");
    }
  });

  it("reports the failing line for schema violations", () => {
    const bad = '{"step":0,"pose":{"x":1,"y":1,"heading":"E"},"sensors":"10","output":"000101","action":"Forward","ask_choice":null,"terminal":null}\n';
    expect(() => parseTrace(bad)).toThrow(/line 1/);
  });

  it("frame() bounds are checked", () => {
    const playback = loadPlayback(CORRIDOR_4);
    expect(() => playback.frame(4)).toThrow(RangeError);
    expect(() => playback.frame(-1)).toThrow(RangeError);
  });
});
