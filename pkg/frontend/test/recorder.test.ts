import { describe, expect, it } from "vitest";

import { ScenarioRecorder, toDslLine } from "../src/recorder.js";

describe("scenario recorder", () => {
  it("builds DSL lines matching the harness grammar", () => {
    expect(toDslLine("identify", { user_id: "1234", lon: 10.1, lat: 36.8 })).toBe(
      "user 1234 identify lon=10.1 lat=36.8",
    );
    expect(
      toDslLine("query", { user_id: "1234", category: "Assurance", max_km: 1 }),
    ).toBe("user 1234 request category=Assurance max_km=1");
    expect(toDslLine("power", { device: "pda", on: false })).toBe(
      "device pda power on=false",
    );
  });

  it("quotes values with spaces and escapes control characters", () => {
    const line = toDslLine("inject", {
      source: "pump-7",
      severity: "critical",
      text: 'pressure "high"\nnow',
    });
    expect(line).toBe(
      'alarm inject source=pump-7 severity=critical text="pressure \\"high\\"\\nnow"',
    );
  });

  it("serializes a session with ticks and a seed header", () => {
    const recorder = new ScenarioRecorder();
    recorder.record(1, "identify", { user_id: "1234", lon: 10.1, lat: 36.8 });
    recorder.record(2, "power", { device: "tv", on: true });
    const text = recorder.serialize();
    expect(text).toContain("seed registry builtin");
    expect(text).toContain("at 1 user 1234 identify lon=10.1 lat=36.8");
    expect(text).toContain("at 2 device tv power on=true");
    expect(text.endsWith("\n")).toBe(true);
  });

  it("skips unknown actions", () => {
    expect(toDslLine("dance", {})).toBeNull();
  });
});
