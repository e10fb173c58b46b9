/** Vitest global setup: prepare artifacts and launch the python service.
 *
 * The integration suite talks to a real `caddie serve` process over HTTP;
 * its base URL is provided to the tests as `serviceUrl`.
 */

import { spawn, spawnSync } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import type { ChildProcess } from "node:child_process";

const here = dirname(fileURLToPath(import.meta.url));
const PYTHON = process.env.CADDIE_PYTHON ?? "python3";

let server: ChildProcess | null = null;

async function waitUntilUp(url: string, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${url}/holes`);
      if (resp.ok) return;
    } catch (err) {
      lastError = err;
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error(`service did not come up at ${url}: ${lastError}`);
}

export default async function setup({ provide }: {
  provide: (key: string, value: string) => void;
}): Promise<() => void> {
  const prepared = spawnSync(
    PYTHON, [join(here, "prepare_artifacts.py")], { encoding: "utf8" });
  if (prepared.status !== 0) {
    throw new Error(`artifact preparation failed:\n${prepared.stdout}`
      + `\n${prepared.stderr}`);
  }
  const artifacts = prepared.stdout.trim().split("\n").pop()!;

  const port = 20000 + (process.pid % 20000);
  const url = `http://127.0.0.1:${port}`;
  server = spawn(PYTHON, [
    "-m", "caddie", "serve",
    "--holes", join(artifacts, "holes"),
    "--profiles", join(artifacts, "profiles"),
    "--policies", join(artifacts, "policies"),
    "--host", "127.0.0.1", "--port", String(port),
  ], { stdio: ["ignore", "inherit", "inherit"] });

  await waitUntilUp(url, 60_000);
  provide("serviceUrl", url);

  return () => {
    server?.kill("SIGTERM");
  };
}
