// The HMI preview: a pure panel model derived from the descriptor, with a
// thin DOM renderer on top. Keeping the model pure makes the "panel is a
// function of the latest descriptor" invariant unit-testable without a
// browser.

import type { Descriptor, Widget } from "./types.js";

const THEME_TOKENS: Record<string, string> = {
  pink: "#f7c6dc",
  blue: "#bcd7f5",
  neutral: "#e8e8e8",
  green: "#c9e8c9",
};

export interface Panel {
  themeToken: string;
  vocalBadge: boolean;
  transcript: string[];
  title: string;
  greeting: string;
  widgets: Widget[];
  error: string | null;
}

export function themeToken(color: string): string {
  if (color in THEME_TOKENS) return THEME_TOKENS[color] as string;
  if (/^#[0-9a-fA-F]{3,8}$/.test(color)) return color; // user-chosen hex
  return THEME_TOKENS.neutral as string;
}

export function buildPanel(descriptor: Descriptor | null): Panel {
  if (descriptor === null) {
    return {
      themeToken: themeToken("neutral"),
      vocalBadge: false,
      transcript: [],
      title: "",
      greeting: "",
      widgets: [],
      error: null,
    };
  }
  if (
    typeof descriptor.theme_color !== "string" ||
    typeof descriptor.greeting !== "string" ||
    !Array.isArray(descriptor.widgets)
  ) {
    return {
      themeToken: themeToken("neutral"),
      vocalBadge: false,
      transcript: [],
      title: "",
      greeting: "",
      widgets: [],
      error: "malformed presentation descriptor",
    };
  }
  const transcript: string[] = [];
  if (descriptor.vocal) {
    transcript.push(descriptor.greeting.trimEnd());
    for (const w of descriptor.widgets) {
      if (w.kind === "prompt") transcript.push(w.text);
    }
  }
  return {
    themeToken: themeToken(descriptor.theme_color),
    vocalBadge: descriptor.vocal,
    transcript,
    title: descriptor.title,
    greeting: descriptor.greeting,
    widgets: descriptor.widgets,
    error: null,
  };
}

export function renderPanel(
  panel: Panel,
  root: HTMLElement,
  onPick?: (serviceId: string) => void,
): void {
  root.innerHTML = "";
  root.style.background = panel.themeToken;
  if (panel.error) {
    const banner = document.createElement("div");
    banner.className = "error-banner";
    banner.textContent = panel.error;
    root.appendChild(banner);
    return;
  }
  const title = document.createElement("div");
  title.className = "hmi-title";
  title.textContent = panel.title;
  root.appendChild(title);

  if (panel.vocalBadge) {
    const badge = document.createElement("span");
    badge.className = "vocal-badge";
    badge.textContent = "VOCAL";
    root.appendChild(badge);
  }

  const greeting = document.createElement("pre");
  greeting.className = "hmi-greeting";
  greeting.textContent = panel.greeting;
  root.appendChild(greeting);

  const list = document.createElement("div");
  list.className = "hmi-widgets";
  for (const w of panel.widgets) {
    const el = document.createElement(w.kind === "list" ? "button" : "div");
    el.className = `widget widget-${w.kind}`;
    el.textContent = w.text;
    if (w.kind === "list" && w.service_id && onPick) {
      const id = w.service_id;
      el.addEventListener("click", () => onPick(id));
    }
    list.appendChild(el);
  }
  root.appendChild(list);

  if (panel.vocalBadge) {
    const pane = document.createElement("div");
    pane.className = "transcript";
    for (const line of panel.transcript) {
      const p = document.createElement("div");
      p.textContent = `\u{1F50A} ${line}`;
      pane.appendChild(p);
    }
    root.appendChild(pane);
  }
}
