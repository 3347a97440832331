// Trace playback: parse a persisted JSONL trace and scrub through it with
// the same pose semantics the live view uses.

import { poseAfter } from "./kinematics.js";
import { parseTraceRecord, ProtocolError } from "./protocol.js";
import type { PoseMsg, TerminalStatus, TraceRecordMsg } from "./protocol.js";

export class TraceParseError extends Error {
  constructor(message: string, public readonly line: number) {
    super(`line ${line}: ${message}`);
  }
}

export function parseTrace(text: string): TraceRecordMsg[] {
  const records: TraceRecordMsg[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const raw = lines[i].trim();
    if (!raw) continue;
    let value: unknown;
    try {
      value = JSON.parse(raw);
    } catch {
      throw new TraceParseError("not JSON", i + 1);
    }
    try {
      records.push(parseTraceRecord(value));
    } catch (err) {
      if (err instanceof ProtocolError) throw new TraceParseError(err.message, i + 1);
      throw err;
    }
  }
  return records;
}

export interface PlaybackFrame {
  index: number;
  record: TraceRecordMsg;
  poseBefore: PoseMsg;
  poseAfter: PoseMsg;
  askChoice: string | null;
  terminal: TerminalStatus | null;
}

export class Playback {
  readonly records: TraceRecordMsg[];

  constructor(records: TraceRecordMsg[]) {
    this.records = records;
  }

  get length(): number {
    return this.records.length;
  }

  get isEmpty(): boolean {
    return this.records.length === 0;
  }

  frame(index: number): PlaybackFrame {
    if (index < 0 || index >= this.records.length) {
      throw new RangeError(`frame ${index} outside 0..${this.records.length - 1}`);
    }
    const record = this.records[index];
    return {
      index,
      record,
      poseBefore: record.pose,
      poseAfter: poseAfter(record),
      askChoice: record.ask_choice,
      terminal: record.terminal,
    };
  }

  // Pose after each rendered frame; comparable to the live view's sequence.
  poseSequence(): PoseMsg[] {
    return this.records.map((record) => poseAfter(record));
  }

  finalStatus(): TerminalStatus | null {
    return this.records.length ? this.records[this.records.length - 1].terminal : null;
  }
}

export function loadPlayback(text: string): Playback {
  return new Playback(parseTrace(text));
}
