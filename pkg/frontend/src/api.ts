import type { LogEvent, StateSnapshot } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly type: string,
    detail: string,
  ) {
    super(`${type}: ${detail}`);
  }
}

export class ApiClient {
  constructor(readonly base: string) {}

  private async send(method: string, path: string, body?: unknown): Promise<unknown> {
    const resp = await fetch(this.base + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : {},
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      const err = (payload.error ?? {}) as { type?: string; detail?: string };
      throw new ApiError(resp.status, err.type ?? "Error", err.detail ?? "");
    }
    return payload;
  }

  state(): Promise<StateSnapshot> {
    return this.send("GET", "/state") as Promise<StateSnapshot>;
  }

  async log(since: number): Promise<LogEvent[]> {
    const payload = (await this.send("GET", `/log?since=${since}`)) as {
      events: LogEvent[];
    };
    return payload.events;
  }

  post(path: string, body: Record<string, unknown>): Promise<unknown> {
    return this.send("POST", path, body);
  }

  delete(path: string): Promise<unknown> {
    return this.send("DELETE", path);
  }
}
