// Records operator actions as scenario-DSL lines so a console session can be
// saved and replayed as a regression scenario.

export interface RecordedStep {
  tick: number;
  line: string;
}

function quote(value: string): string {
  const escaped = value
    .replace(/\\/g, "\\\\")
    .replace(/"/g, '\\"')
    .replace(/\n/g, "\\n")
    .replace(/\t/g, "\\t");
  return `"${escaped}"`;
}

function arg(key: string, value: unknown): string {
  const text = String(value);
  return /[\s"\\]/.test(text) ? `${key}=${quote(text)}` : `${key}=${text}`;
}

export class ScenarioRecorder {
  readonly steps: RecordedStep[] = [];

  record(tick: number, actionId: string, args: Record<string, unknown>): void {
    const line = toDslLine(actionId, args);
    if (line) this.steps.push({ tick, line });
  }

  serialize(): string {
    const header = ["# recorded console session", "seed registry builtin"];
    const body = this.steps.map((s) => `at ${s.tick} ${s.line}`);
    return [...header, ...body].join("\n") + "\n";
  }
}

export function toDslLine(
  actionId: string,
  a: Record<string, unknown>,
): string | null {
  switch (actionId) {
    case "identify":
      return `user ${a.user_id} identify ${arg("lon", a.lon)} ${arg("lat", a.lat)}`;
    case "query": {
      const parts = [`user ${a.user_id} request`];
      if (a.category != null) parts.push(arg("category", a.category));
      if (a.max_km != null) parts.push(arg("max_km", a.max_km));
      return parts.join(" ");
    }
    case "move":
      return `user ${a.user_id} move ${arg("lon", a.lon)} ${arg("lat", a.lat)}`;
    case "select":
      return `user ${a.user_id} select ${arg("service", a.service_id)}`;
    case "power":
      return `device ${a.device} power ${arg("on", a.on)}`;
    case "inject":
      return `alarm inject ${arg("source", a.source)} ${arg("severity", a.severity)} ${arg("text", a.text)}`;
    case "override":
      return `user ${a.user_id} override ${arg("field", a.field)} ${arg("value", a.value)}`;
    case "clear_override":
      return `user ${a.user_id} clear_override ${arg("field", a.field)}`;
    case "weave": {
      const advices = (a.advices as { kind: string; action: string }[]) ?? [];
      const spec = advices.map((x) => `${x.kind}:${x.action}`).join(",");
      return `aspect weave ${arg("id", a.id)} ${arg("pointcut", a.pointcut)} ${arg("advice", spec)}`;
    }
    case "unweave":
      return `aspect unweave ${arg("id", a.id)}`;
    default:
      return null;
  }
}
