// Message types for the session service's line-JSON protocol, plus strict
// parsing. One JSON object per line (TCP) or per message (WebSocket).

export type Heading = "N" | "E" | "S" | "W";
export type DirectionLetter = "F" | "B" | "L" | "R";
export type TerminalStatus = "AIRBORNE" | "GOAL" | "STEP_LIMIT";
export type ActionName =
  | "Forward"
  | "Backward"
  | "TurnLeft"
  | "TurnRight"
  | "LiftOff"
  | "Ask";

export interface PoseMsg {
  x: number;
  y: number;
  heading: Heading;
}

export interface TraceRecordMsg {
  step: number;
  pose: PoseMsg;
  sensors: string;
  output: string;
  action: ActionName;
  ask_choice: DirectionLetter | null;
  terminal: TerminalStatus | null;
}

export interface GridMsg {
  width: number;
  height: number;
  rows: string[];
  goal: [number, number] | null;
}

export interface StateMsg {
  type: "state";
  status: "RUNNING" | TerminalStatus;
  map: GridMsg;
  pose: PoseMsg;
  step: number;
  max_steps: number;
  pending: { step: number; clear: DirectionLetter[] } | null;
  last_record: TraceRecordMsg | null;
}

export interface RecordMsg extends TraceRecordMsg {
  type: "record";
}

export interface AskMsg {
  type: "ask";
  step: number;
  clear: DirectionLetter[];
}

export interface TerminalMsg {
  type: "terminal";
  status: TerminalStatus;
}

export interface ErrorMsg {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage = StateMsg | RecordMsg | AskMsg | TerminalMsg | ErrorMsg;

export type ClientMessage =
  | { type: "start"; map: string; max_steps?: number }
  | { type: "step" }
  | { type: "answer"; direction: DirectionLetter }
  | { type: "state" };

const HEADINGS: readonly string[] = ["N", "E", "S", "W"];
const DIRECTIONS: readonly string[] = ["F", "B", "L", "R"];
const TERMINALS: readonly string[] = ["AIRBORNE", "GOAL", "STEP_LIMIT"];
const ACTIONS: readonly string[] = [
  "Forward",
  "Backward",
  "TurnLeft",
  "TurnRight",
  "LiftOff",
  "Ask",
];

export class ProtocolError extends Error {}

function fail(why: string): never {
  throw new ProtocolError(why);
}

function asObject(value: unknown, what: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(`${what} must be an object`);
  }
  return value as Record<string, unknown>;
}

function asNumber(value: unknown, what: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) fail(`${what} must be a number`);
  return value;
}

function asString(value: unknown, what: string): string {
  if (typeof value !== "string") fail(`${what} must be a string`);
  return value;
}

function asOneOf<T extends string>(value: unknown, allowed: readonly string[], what: string): T {
  const text = asString(value, what);
  if (!allowed.includes(text)) fail(`${what} must be one of ${allowed.join("/")}, got ${text}`);
  return text as T;
}

export function parsePose(value: unknown): PoseMsg {
  const obj = asObject(value, "pose");
  return {
    x: asNumber(obj.x, "pose.x"),
    y: asNumber(obj.y, "pose.y"),
    heading: asOneOf<Heading>(obj.heading, HEADINGS, "pose.heading"),
  };
}

export function parseTraceRecord(value: unknown): TraceRecordMsg {
  const obj = asObject(value, "record");
  const sensors = asString(obj.sensors, "sensors");
  if (!/^[01]{4}$/.test(sensors)) fail(`sensors must be 4 bits, got ${sensors}`);
  const output = asString(obj.output, "output");
  if (!/^[01]{6}$/.test(output)) fail(`output must be 6 bits, got ${output}`);
  return {
    step: asNumber(obj.step, "step"),
    pose: parsePose(obj.pose),
    sensors,
    output,
    action: asOneOf<ActionName>(obj.action, ACTIONS, "action"),
    ask_choice:
      obj.ask_choice === null
        ? null
        : asOneOf<DirectionLetter>(obj.ask_choice, DIRECTIONS, "ask_choice"),
    terminal:
      obj.terminal === null
        ? null
        : asOneOf<TerminalStatus>(obj.terminal, TERMINALS, "terminal"),
  };
}

function parseGrid(value: unknown): GridMsg {
  const obj = asObject(value, "map");
  const rows = obj.rows;
  if (!Array.isArray(rows) || rows.some((r) => typeof r !== "string")) {
    fail("map.rows must be an array of strings");
  }
  let goal: [number, number] | null = null;
  if (obj.goal !== null && obj.goal !== undefined) {
    if (!Array.isArray(obj.goal) || obj.goal.length !== 2) fail("map.goal must be [x, y]");
    goal = [asNumber(obj.goal[0], "goal.x"), asNumber(obj.goal[1], "goal.y")];
  }
  return {
    width: asNumber(obj.width, "map.width"),
    height: asNumber(obj.height, "map.height"),
    rows: rows as string[],
    goal,
  };
}

export function parseServerMessage(line: string): ServerMessage {
  let value: unknown;
  try {
    value = JSON.parse(line);
  } catch {
    fail(`not JSON: ${line.slice(0, 80)}`);
  }
  const obj = asObject(value, "message");
  const type = asString(obj.type, "type");
  switch (type) {
    case "state": {
      return {
        type: "state",
        status: asOneOf(obj.status, ["RUNNING", ...TERMINALS], "status"),
        map: parseGrid(obj.map),
        pose: parsePose(obj.pose),
        step: asNumber(obj.step, "step"),
        max_steps: asNumber(obj.max_steps, "max_steps"),
        pending:
          obj.pending === null || obj.pending === undefined
            ? null
            : parseAskBody(obj.pending),
        last_record:
          obj.last_record === null || obj.last_record === undefined
            ? null
            : parseTraceRecord(obj.last_record),
      };
    }
    case "record":
      return { type: "record", ...parseTraceRecord(obj) };
    case "ask":
      return { type: "ask", ...parseAskBody(obj) };
    case "terminal":
      return { type: "terminal", status: asOneOf(obj.status, TERMINALS, "status") };
    case "error":
      return {
        type: "error",
        code: asString(obj.code, "code"),
        message: asString(obj.message, "message"),
      };
    default:
      fail(`unknown server message type ${type}`);
  }
}

function parseAskBody(value: unknown): { step: number; clear: DirectionLetter[] } {
  const obj = asObject(value, "ask");
  const clear = obj.clear;
  if (!Array.isArray(clear) || clear.length === 0) fail("ask.clear must be a nonempty array");
  return {
    step: asNumber(obj.step, "ask.step"),
    clear: clear.map((d) => asOneOf<DirectionLetter>(d, DIRECTIONS, "ask.clear[]")),
  };
}

export function serializeClientMessage(message: ClientMessage): string {
  return JSON.stringify(message);
}
