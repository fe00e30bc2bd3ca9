// Live loop against the real server (S2): the console modules drive the HTTP
// API while state flows back only through the event stream. Each assertion
// fires at the exact stream event that carries the change.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { buildPanel, themeToken } from "../src/hmi.js";
import { parseSseChunks } from "../src/sse.js";
import {
  applyEvent,
  applySnapshot,
  comparableFields,
  initialViewState,
  reconstruct,
  type ViewState,
} from "../src/state.js";
import type { LogEvent } from "../src/types.js";

const REPO_ROOT = resolve(__dirname, "..", "..");
const PORT = 20000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/state`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("server did not come up");
}

beforeAll(async () => {
  const stateDir = mkdtempSync(join(tmpdir(), "ctxbridge-live-"));
  server = spawn(
    "python3",
    ["-m", "ctxbridge.cli", "serve", "--port", String(PORT), "--state", stateDir],
    {
      cwd: REPO_ROOT,
      env: { ...process.env, PYTHONPATH: join(REPO_ROOT, "src") },
      stdio: "ignore",
    },
  );
  await waitForServer();
}, 30000);

afterAll(() => {
  server?.kill();
});

class StreamWatcher {
  private queue: LogEvent[] = [];
  private waiters: ((e: LogEvent) => void)[] = [];
  private abort = new AbortController();

  async start(since: number): Promise<void> {
    const resp = await fetch(`${BASE}/stream?since=${since}`, {
      signal: this.abort.signal,
    });
    if (!resp.ok || !resp.body) throw new Error("stream failed");
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    const parser = parseSseChunks();
    void (async () => {
      try {
        for (;;) {
          const { done, value } = await reader.read();
          if (done) return;
          for (const msg of parser.push(decoder.decode(value, { stream: true }))) {
            if (!msg.data) continue;
            const event = JSON.parse(msg.data) as LogEvent;
            const waiter = this.waiters.shift();
            if (waiter) waiter(event);
            else this.queue.push(event);
          }
        }
      } catch {
        // aborted
      }
    })();
  }

  next(timeoutMs = 5000): Promise<LogEvent> {
    const queued = this.queue.shift();
    if (queued) return Promise.resolve(queued);
    return new Promise((resolveNext, reject) => {
      const timer = setTimeout(
        () => reject(new Error("timed out waiting for stream event")),
        timeoutMs,
      );
      this.waiters.push((e) => {
        clearTimeout(timer);
        resolveNext(e);
      });
    });
  }

  stop(): void {
    this.abort.abort();
  }
}

describe("live loop", () => {
  it(
    "drives the TV routing and theme override within one stream event each",
    { timeout: 30000 },
    async () => {
      const api = new ApiClient(BASE);
      let state: ViewState = applySnapshot(initialViewState(), await api.state());
      for (const event of await api.log(-1)) state = applyEvent(state, event);

      const watcher = new StreamWatcher();
      await watcher.start(state.lastSeq);

      const takeUntil = async (kind: string): Promise<LogEvent> => {
        for (;;) {
          const event = await watcher.next();
          state = applyEvent(state, event);
          if (event.kind === kind) return event;
        }
      };

      // identify so the HMI panel exists
      await api.post("/identify", { user_id: "1234", lon: 10.1, lat: 36.8 });
      await takeUntil("services_sent");
      expect(buildPanel(state.descriptor).themeToken).toBe(themeToken("pink"));
      expect(state.pendingPrompt).toBe("Do you want a service?");

      // toggle PDA off, inject critical: the feed shows the TV route at the
      // alarm_routed event itself
      await api.post("/device/pda/power", { on: false });
      await takeUntil("device_power");
      expect(state.devices.pda_on).toBe(false);

      await api.post("/alarms/inject", {
        source: "pump-7",
        severity: "critical",
        text: "pressure high",
      });
      const routed = await takeUntil("alarm_routed");
      expect(state.lastRoute?.route).toBe("TV");
      expect(state.lastRoute?.path).toContain("assembly1");
      expect((routed.data as { route: string }).route).toBe("TV");

      // set override blue: the panel re-renders blue at the hmi_adapted event
      await api.post("/hmi/override", { field: "theme_color", value: "blue" });
      await takeUntil("hmi_adapted");
      const panel = buildPanel(state.descriptor);
      expect(panel.themeToken).toBe(themeToken("blue"));
      // the service widgets survived the re-render
      expect(panel.widgets.some((w) => w.kind === "list")).toBe(true);

      // reload law against the live server: /state + full /log replay
      const snapshot = await api.state();
      const fullLog = await api.log(-1);
      const reloaded = reconstruct(snapshot, fullLog);
      const live = { ...state, assembly: snapshot.assembly };
      expect(comparableFields(reloaded)).toEqual(comparableFields(live));

      watcher.stop();
    },
  );
});
