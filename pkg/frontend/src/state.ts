// ViewState lives entirely downstream of the server: a /state snapshot plus
// the event stream. User actions never mutate it directly (no optimistic UI),
// so reconnect + /state + /log replay always reconstructs the same state.

import type {
  Descriptor,
  DeviceStates,
  LogEvent,
  RouteInfo,
  ServiceRow,
  StateSnapshot,
  Widget,
} from "./types.js";

export const FEED_LIMIT = 200;

export interface ViewState {
  tick: number;
  currentUser: string | null;
  devices: DeviceStates;
  queueDepth: number;
  descriptor: Descriptor | null;
  services: ServiceRow[];
  pendingPrompt: string | null;
  selectedService: string | null;
  lastRoute: RouteInfo | null;
  wovenAspects: string[];
  assembly: string;
  feed: LogEvent[];
  lastSeq: number;
}

export function initialViewState(): ViewState {
  return {
    tick: 0,
    currentUser: null,
    devices: { pda_on: true, tv_on: true },
    queueDepth: 0,
    descriptor: null,
    services: [],
    pendingPrompt: null,
    selectedService: null,
    lastRoute: null,
    wovenAspects: [],
    assembly: "",
    feed: [],
    lastSeq: -1,
  };
}

export function applySnapshot(state: ViewState, snap: StateSnapshot): ViewState {
  return {
    ...state,
    tick: snap.tick,
    currentUser: snap.current_user,
    devices: { ...snap.devices },
    queueDepth: snap.queue_depth,
    descriptor: snap.descriptor,
    services: snap.services,
    pendingPrompt: promptOf(snap.descriptor?.widgets ?? []),
    wovenAspects: [...snap.woven_aspects],
    assembly: snap.assembly,
  };
}

function promptOf(widgets: Widget[]): string | null {
  const prompt = widgets.find((w) => w.kind === "prompt");
  return prompt ? prompt.text : null;
}

export function applyEvent(state: ViewState, event: LogEvent): ViewState {
  if (event.seq <= state.lastSeq) return state; // replay overlap: skip
  const next: ViewState = {
    ...state,
    tick: event.tick,
    lastSeq: event.seq,
    feed: [...state.feed, event].slice(-FEED_LIMIT),
  };
  const d = event.data as Record<string, unknown>;
  switch (event.kind) {
    case "profile_loaded":
      next.currentUser = d["user"] as string;
      break;
    case "hmi_adapted":
      next.descriptor = d["descriptor"] as Descriptor;
      next.pendingPrompt = promptOf(next.descriptor.widgets);
      break;
    case "services_sent": {
      const services = d["services"] as ServiceRow[] | undefined;
      const widgets = d["widgets"] as Widget[] | undefined;
      if (services) next.services = services;
      if (widgets) {
        next.pendingPrompt = promptOf(widgets);
        if (next.descriptor) {
          next.descriptor = { ...next.descriptor, widgets };
        }
      }
      break;
    }
    case "services_pushed": {
      const services = d["services"] as ServiceRow[] | undefined;
      if (services) next.services = services;
      break;
    }
    case "service_selected":
      next.selectedService = d["service"] as string;
      break;
    case "device_power": {
      const device = d["device"] as string;
      const on = d["on"] as boolean;
      next.devices =
        device === "pda"
          ? { ...next.devices, pda_on: on }
          : { ...next.devices, tv_on: on };
      break;
    }
    case "alarm_routed":
      next.lastRoute = {
        alarm_id: d["alarm_id"] as string,
        route: d["route"] as string,
        path: d["path"] as string[],
      };
      break;
    case "alarm_queued":
      next.queueDepth = d["depth"] as number;
      break;
    case "alarm_flushed":
      next.queueDepth = d["depth"] as number;
      break;
    case "aspect_woven": {
      const aspect = d["aspect"] as string;
      if (!next.wovenAspects.includes(aspect)) {
        next.wovenAspects = [...next.wovenAspects, aspect];
      }
      break;
    }
    case "aspect_unwoven":
      next.wovenAspects = next.wovenAspects.filter(
        (a) => a !== (d["aspect"] as string),
      );
      break;
    default:
      break; // feed-only event
  }
  return next;
}

export function applyEvents(state: ViewState, events: LogEvent[]): ViewState {
  return events.reduce(applyEvent, state);
}

// Reload law: a fresh console that fetches /state and replays the full log
// must land on the same state (field-wise; the feed keeps its tail window).
export function reconstruct(
  snapshot: StateSnapshot,
  fullLog: LogEvent[],
): ViewState {
  const base = applySnapshot(initialViewState(), snapshot);
  const replayed = applyEvents({ ...base, lastSeq: -1, feed: [] }, fullLog);
  // snapshot-only fields are authoritative from the snapshot
  return { ...replayed, assembly: snapshot.assembly };
}

export function comparableFields(state: ViewState): Record<string, unknown> {
  const { feed, lastSeq, ...rest } = state;
  void feed;
  void lastSeq;
  return rest;
}
