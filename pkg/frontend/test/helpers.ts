// Node-side plumbing for the live tests: a TCP line transport (the browser
// uses WebSocket instead; the wire format is identical) and a harness that
// spawns the Python session service on an ephemeral port.

import { spawn, type ChildProcess } from "node:child_process";
import net from "node:net";
import { fileURLToPath } from "node:url";
import path from "node:path";

import type { LineTransport } from "../src/client.js";

export const FRONTEND_DIR = path.dirname(path.dirname(fileURLToPath(import.meta.url)));
export const REPO_DIR = path.dirname(FRONTEND_DIR);

export class TcpTransport implements LineTransport {
  private socket: net.Socket;
  private buffer = "";
  private lineHandler: (line: string) => void = () => {};

  constructor(port: number, host = "127.0.0.1") {
    this.socket = net.createConnection({ port, host });
    this.socket.setEncoding("utf-8");
    this.socket.on("data", (chunk: string) => {
      this.buffer += chunk;
      let index;
      while ((index = this.buffer.indexOf("\n")) >= 0) {
        const line = this.buffer.slice(0, index);
        this.buffer = this.buffer.slice(index + 1);
        if (line.trim()) this.lineHandler(line);
      }
    });
  }

  send(line: string): void {
    this.socket.write(line + "\n");
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }

  onOpen(handler: () => void): void {
    this.socket.on("connect", handler);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.socket.on("close", handler);
  }
}

export interface ServiceHandle {
  port: number;
  process: ChildProcess;
  stop(): void;
}

export async function startService(): Promise<ServiceHandle> {
  const child = spawn("python3", ["-m", "qbot", "serve", "--port", "0"], {
    cwd: REPO_DIR,
    stdio: ["ignore", "pipe", "pipe"],
  });
  const port = await new Promise<number>((resolve, reject) => {
    let out = "";
    const timer = setTimeout(() => reject(new Error(`service did not bind; output: ${out}`)), 15000);
    child.stdout!.setEncoding("utf-8");
    child.stdout!.on("data", (chunk: string) => {
      out += chunk;
      const match = out.match(/listening on 127\.0\.0\.1:(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    child.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early (${code}); output: ${out}`));
    });
  });
  return {
    port,
    process: child,
    stop: () => {
      child.kill("SIGTERM");
    },
  };
}
