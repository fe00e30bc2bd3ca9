// Minimal server-sent-events reader over fetch streams, so the same code
// runs in the browser and under node (no EventSource dependency).

export interface SseMessage {
  id: string | null;
  event: string | null;
  data: string;
}

export function parseSseChunks(): {
  push: (chunk: string) => SseMessage[];
} {
  let buffer = "";

  function drain(): SseMessage[] {
    const messages: SseMessage[] = [];
    let sep = buffer.indexOf("\n\n");
    while (sep >= 0) {
      const block = buffer.slice(0, sep);
      buffer = buffer.slice(sep + 2);
      const msg: SseMessage = { id: null, event: null, data: "" };
      const dataLines: string[] = [];
      for (const line of block.split("\n")) {
        if (line.startsWith("id: ")) msg.id = line.slice(4);
        else if (line.startsWith("event: ")) msg.event = line.slice(7);
        else if (line.startsWith("data: ")) dataLines.push(line.slice(6));
        // lines starting with ":" are keep-alive comments
      }
      msg.data = dataLines.join("\n");
      if (msg.data || msg.event || msg.id) messages.push(msg);
      sep = buffer.indexOf("\n\n");
    }
    return messages;
  }

  return {
    push(chunk: string) {
      buffer += chunk;
      return drain();
    },
  };
}

export async function consumeStream(
  url: string,
  onMessage: (msg: SseMessage) => void,
  signal?: AbortSignal,
): Promise<void> {
  const resp = await fetch(url, { signal });
  if (!resp.ok || !resp.body) {
    throw new Error(`stream failed: ${resp.status}`);
  }
  const reader = resp.body.getReader();
  const decoder = new TextDecoder();
  const parser = parseSseChunks();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) return;
    for (const msg of parser.push(decoder.decode(value, { stream: true }))) {
      onMessage(msg);
    }
  }
}
