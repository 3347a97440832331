// Pure view-state reducer over the server message stream. The invariants the
// UI owes the user live here: direction buttons are enabled only for the
// directions of the pending ask, and stepping is impossible while an ask is
// pending or the episode is over.

import { poseAfter } from "./kinematics.js";
import type {
  DirectionLetter,
  GridMsg,
  PoseMsg,
  ServerMessage,
  TerminalStatus,
  TraceRecordMsg,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";
export type EpisodeStatus = "IDLE" | "RUNNING" | TerminalStatus;

export interface ViewState {
  connection: ConnectionStatus;
  status: EpisodeStatus;
  grid: GridMsg | null;
  pose: PoseMsg | null;
  lastRecord: TraceRecordMsg | null;
  pendingAsk: { step: number; clear: DirectionLetter[] } | null;
  lastError: { code: string; message: string } | null;
}

export const initialViewState: ViewState = {
  connection: "connecting",
  status: "IDLE",
  grid: null,
  pose: null,
  lastRecord: null,
  pendingAsk: null,
  lastError: null,
};

export function applyServerMessage(state: ViewState, message: ServerMessage): ViewState {
  switch (message.type) {
    case "state":
      return {
        ...state,
        status: message.status,
        grid: message.map,
        pose: message.pose,
        lastRecord: message.last_record,
        pendingAsk: message.pending,
        lastError: null,
      };
    case "record": {
      const { type: _ignored, ...record } = message;
      return {
        ...state,
        pose: poseAfter(record),
        lastRecord: record,
        pendingAsk: null, // the responding record closes the dialog
        lastError: null,
        status: record.terminal ?? state.status,
      };
    }
    case "ask":
      return {
        ...state,
        pendingAsk: { step: message.step, clear: [...message.clear] },
        lastError: null,
      };
    case "terminal":
      return { ...state, status: message.status, pendingAsk: null };
    case "error":
      // Server rejections surface; a pending ask stays pending.
      return { ...state, lastError: { code: message.code, message: message.message } };
  }
}

export function setConnection(state: ViewState, connection: ConnectionStatus): ViewState {
  return { ...state, connection };
}

export function canStep(state: ViewState): boolean {
  return (
    state.connection === "connected" && state.status === "RUNNING" && state.pendingAsk === null
  );
}

export function enabledDirections(state: ViewState): DirectionLetter[] {
  if (state.connection !== "connected" || state.status !== "RUNNING") return [];
  return state.pendingAsk ? [...state.pendingAsk.clear] : [];
}

export function isAirborne(state: ViewState): boolean {
  return state.status === "AIRBORNE";
}
