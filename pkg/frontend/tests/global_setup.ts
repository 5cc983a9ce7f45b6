// Boots the Python workbench server once for the live API tests.

import { spawn, type ChildProcess } from "node:child_process";

export const SERVER_PORT = 8123;
export const SERVER_URL = `http://127.0.0.1:${SERVER_PORT}`;

let server: ChildProcess | undefined;

async function waitForServer(url: string, attempts = 60): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      const response = await fetch(`${url}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: "{}",
      });
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 500));
  }
  throw new Error(`workbench server did not come up at ${url}`);
}

export default async function setup(): Promise<() => Promise<void>> {
  server = spawn("workbench", ["serve", "--port", String(SERVER_PORT)], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  const stderr: string[] = [];
  server.stderr?.on("data", (chunk: Buffer) => stderr.push(chunk.toString()));
  server.on("exit", (code) => {
    if (code !== null && code !== 0) {
      console.error("workbench serve exited:", code, stderr.join(""));
    }
  });
  await waitForServer(SERVER_URL);
  return async () => {
    server?.kill("SIGTERM");
    await new Promise((resolve) => setTimeout(resolve, 300));
    if (server && server.exitCode === null) {
      server.kill("SIGKILL");
    }
  };
}
