import { describe, expect, it } from "vitest";

import { parseSseChunks } from "../src/sse.js";

describe("sse parser", () => {
  it("parses complete messages", () => {
    const parser = parseSseChunks();
    const messages = parser.push(
      'id: 3\nevent: alarm_routed\ndata: {"route":"TV"}\n\n',
    );
    expect(messages).toEqual([
      { id: "3", event: "alarm_routed", data: '{"route":"TV"}' },
    ]);
  });

  it("handles messages split across arbitrary chunk boundaries", () => {
    const wire = 'id: 1\nevent: a\ndata: {"x":1}\n\nid: 2\nevent: b\ndata: {"y":2}\n\n';
    for (let cut = 0; cut < wire.length; cut++) {
      const parser = parseSseChunks();
      const got = [
        ...parser.push(wire.slice(0, cut)),
        ...parser.push(wire.slice(cut)),
      ];
      expect(got).toHaveLength(2);
      expect(got[0]?.data).toBe('{"x":1}');
      expect(got[1]?.id).toBe("2");
    }
  });

  it("ignores keep-alive comments", () => {
    const parser = parseSseChunks();
    expect(parser.push(": keep-alive\n\n")).toEqual([]);
    expect(parser.push("data: x\n\n")).toHaveLength(1);
  });
});
