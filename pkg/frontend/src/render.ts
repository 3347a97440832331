// Text rendering shared by the live view, playback, and the tests. main.ts
// drops these strings into the page; tests assert on them directly.

import type { DirectionLetter, GridMsg, PoseMsg, TraceRecordMsg } from "./protocol.js";
import { enabledDirections, isAirborne, type ViewState } from "./viewState.js";

const HEADING_CHARS: Record<string, string> = { N: "^", E: ">", S: "v", W: "<" };
const SENSOR_NAMES: Array<[string, DirectionLetter]> = [
  ["front", "F"],
  ["back", "B"],
  ["left", "L"],
  ["right", "R"],
];

export function renderGrid(grid: GridMsg, pose: PoseMsg | null, airborne = false): string {
  const rows = grid.rows.map((row, y) => {
    if (pose === null || pose.y !== y) return row;
    const marker = airborne ? "*" : HEADING_CHARS[pose.heading];
    return row.slice(0, pose.x) + marker + row.slice(pose.x + 1);
  });
  return rows.join("\n");
}

export function renderSensors(sensors: string): string {
  const parts = SENSOR_NAMES.map(([name], i) => `${name} ${sensors[i] === "1" ? "clear" : "blocked"}`);
  return parts.join(", ");
}

export function renderAskDialog(state: ViewState): string {
  if (!state.pendingAsk) return "";
  const enabled = enabledDirections(state);
  const buttons = (["F", "B", "L", "R"] as DirectionLetter[])
    .map((d) => (enabled.includes(d) ? `[${d}]` : ` ${d} `))
    .join(" ");
  return `choose a direction: ${buttons}`;
}

export function renderRecord(record: TraceRecordMsg): string {
  const choice = record.ask_choice ? ` (chose ${record.ask_choice})` : "";
  const terminal = record.terminal ? ` -> ${record.terminal}` : "";
  return `step ${record.step}: sensors ${record.sensors} -> ${record.output} ${record.action}${choice}${terminal}`;
}

export function renderView(state: ViewState): string {
  const lines: string[] = [];
  lines.push(`connection: ${state.connection}`);
  lines.push(`status: ${state.status}`);
  if (state.grid) {
    lines.push(renderGrid(state.grid, state.pose, isAirborne(state)));
  }
  if (state.lastRecord) {
    lines.push(renderRecord(state.lastRecord));
  }
  if (state.pendingAsk) {
    lines.push(renderAskDialog(state));
  }
  if (state.lastError) {
    lines.push(`error [${state.lastError.code}]: ${state.lastError.message}`);
  }
  return lines.join("\n");
}
