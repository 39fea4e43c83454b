// Spawns the real Python API with a scripted provider for integration specs.
import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';

// vitest runs with the package root as cwd; the fixture transcripts live in
// the engine's test tree one level up.
const FIXTURES = resolve(process.cwd(), '..', 'tests', 'fixtures');

export interface ScriptEntry {
  match: string;
  reply?: string;
  reply_file?: string;
}

export interface TestServer {
  origin: string;
  stop(): void;
}

export function fixturePath(name: string): string {
  return join(FIXTURES, name);
}

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export async function waitFor(
  condition: () => boolean,
  timeoutMs = 10000,
  label = 'condition',
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!condition()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${label}`);
    await sleep(25);
  }
}

export async function startServer(entries: ScriptEntry[]): Promise<TestServer> {
  const dir = mkdtempSync(join(tmpdir(), 'menucraft-ui-'));
  const scriptFile = join(dir, 'script.json');
  writeFileSync(scriptFile, JSON.stringify(entries, null, 2));
  const port = 18000 + Math.floor(Math.random() * 20000);
  const origin = `http://127.0.0.1:${port}`;
  const proc: ChildProcess = spawn(
    'python3',
    [
      '-m', 'menucraft.cli', 'serve',
      '--host', '127.0.0.1',
      '--port', String(port),
      '--sessions', join(dir, 'sessions'),
      '--script', scriptFile,
    ],
    { stdio: ['ignore', 'pipe', 'pipe'] },
  );
  let logs = '';
  proc.stdout?.on('data', (chunk) => (logs += chunk));
  proc.stderr?.on('data', (chunk) => (logs += chunk));

  const deadline = Date.now() + 25000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited with ${proc.exitCode}:\n${logs}`);
    }
    try {
      const res = await fetch(`${origin}/health`);
      if (res.ok) break;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill('SIGKILL');
      throw new Error(`server never became healthy:\n${logs}`);
    }
    await sleep(100);
  }
  return {
    origin,
    stop() {
      proc.kill('SIGTERM');
    },
  };
}
