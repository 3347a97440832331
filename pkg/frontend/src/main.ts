// Browser entry: live episode driving plus trace playback, all plain DOM.
// The page needs the session service running with a WebSocket listener:
//   qbot serve --port 8765 --ws-port 8766

import { SessionClient } from "./client.js";
import { loadPlayback, Playback, TraceParseError } from "./playback.js";
import type { DirectionLetter } from "./protocol.js";
import { renderAskDialog, renderGrid, renderRecord, renderSensors } from "./render.js";
import { canStep, enabledDirections, isAirborne } from "./viewState.js";
import { WebSocketTransport } from "./transport.js";

const DEFAULT_MAP = "#####\n#G..#\n##^##\n#####\n";
const DIRECTION_LABELS: Record<DirectionLetter, string> = {
  F: "front",
  B: "back",
  L: "left",
  R: "right",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function setupLive(): void {
  const endpoint = el<HTMLInputElement>("endpoint");
  const mapText = el<HTMLTextAreaElement>("map-text");
  const connectButton = el<HTMLButtonElement>("connect");
  const startButton = el<HTMLButtonElement>("start");
  const stepButton = el<HTMLButtonElement>("step");
  const gridView = el<HTMLPreElement>("grid");
  const statusView = el<HTMLElement>("status");
  const recordView = el<HTMLElement>("record");
  const sensorView = el<HTMLElement>("sensors");
  const askDialog = el<HTMLElement>("ask-dialog");
  const askButtons = el<HTMLElement>("ask-buttons");
  const errorView = el<HTMLElement>("error");

  mapText.value = DEFAULT_MAP;
  let client: SessionClient | null = null;

  function redraw(): void {
    if (!client) return;
    const state = client.state;
    statusView.textContent = `${state.connection} / ${state.status}`;
    startButton.disabled = state.connection !== "connected";
    stepButton.disabled = !canStep(state);
    gridView.textContent = state.grid
      ? renderGrid(state.grid, state.pose, isAirborne(state))
      : "(no episode)";
    recordView.textContent = state.lastRecord ? renderRecord(state.lastRecord) : "";
    sensorView.textContent = state.lastRecord ? renderSensors(state.lastRecord.sensors) : "";
    errorView.textContent = state.lastError
      ? `${state.lastError.code}: ${state.lastError.message}`
      : "";
    const enabled = enabledDirections(state);
    askDialog.style.display = state.pendingAsk ? "block" : "none";
    askDialog.title = renderAskDialog(state);
    askButtons.replaceChildren(
      ...(["F", "B", "L", "R"] as DirectionLetter[]).map((d) => {
        const button = document.createElement("button");
        button.textContent = `${d} (${DIRECTION_LABELS[d]})`;
        button.disabled = !enabled.includes(d);
        button.onclick = () => void client?.answer(d);
        return button;
      }),
    );
  }

  connectButton.onclick = () => {
    client?.close();
    client = new SessionClient(() => new WebSocketTransport(endpoint.value));
    client.onChange(redraw);
    redraw();
  };
  startButton.onclick = () => void client?.start(mapText.value);
  stepButton.onclick = () => void client?.step();
}

function setupPlayback(): void {
  const fileInput = el<HTMLInputElement>("trace-file");
  const scrubber = el<HTMLInputElement>("scrubber");
  const frameView = el<HTMLPreElement>("playback-frame");
  const banner = el<HTMLElement>("playback-error");
  let playback: Playback | null = null;

  function showFrame(index: number): void {
    if (!playback || playback.isEmpty) {
      frameView.textContent = playback ? "(empty trace)" : "";
      return;
    }
    const frame = playback.frame(index);
    const lines = [
      renderRecord(frame.record),
      `pose ${frame.poseBefore.x},${frame.poseBefore.y} ${frame.poseBefore.heading}` +
        ` -> ${frame.poseAfter.x},${frame.poseAfter.y} ${frame.poseAfter.heading}`,
    ];
    if (frame.askChoice) lines.push(`user chose ${frame.askChoice}`);
    if (frame.terminal) lines.push(`terminal: ${frame.terminal}`);
    frameView.textContent = lines.join("\n");
  }

  fileInput.onchange = async () => {
    banner.textContent = "";
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      playback = loadPlayback(await file.text());
    } catch (err) {
      playback = null;
      banner.textContent = err instanceof TraceParseError ? err.message : String(err);
      return;
    }
    scrubber.max = String(Math.max(playback.length - 1, 0));
    scrubber.value = "0";
    scrubber.disabled = playback.isEmpty;
    showFrame(0);
  };
  scrubber.oninput = () => showFrame(Number(scrubber.value));
}

setupLive();
setupPlayback();
