// Every UI action maps to exactly one documented mutating endpoint; the
// parity test checks this table against the generated endpoint list.

import type { ApiClient } from "./api.js";

export interface UiAction {
  id: string;
  label: string;
  method: string;
  path: string; // template as listed in the parity table
  call: (api: ApiClient, args: Record<string, unknown>) => Promise<unknown>;
}

export const UI_ACTIONS: UiAction[] = [
  {
    id: "identify",
    label: "Identify user",
    method: "POST",
    path: "/identify",
    call: (api, a) =>
      api.post("/identify", {
        user_id: a.user_id,
        lon: a.lon,
        lat: a.lat,
      }),
  },
  {
    id: "query",
    label: "Ask for services",
    method: "POST",
    path: "/services/query",
    call: (api, a) =>
      api.post("/services/query", {
        user_id: a.user_id,
        category: a.category ?? null,
        max_km: a.max_km ?? null,
      }),
  },
  {
    id: "move",
    label: "Move on map",
    method: "POST",
    path: "/user/move",
    call: (api, a) =>
      api.post("/user/move", { user_id: a.user_id, lon: a.lon, lat: a.lat }),
  },
  {
    id: "select",
    label: "Pick provider",
    method: "POST",
    path: "/user/select",
    call: (api, a) =>
      api.post("/user/select", {
        user_id: a.user_id,
        service_id: a.service_id,
      }),
  },
  {
    id: "power",
    label: "Toggle device power",
    method: "POST",
    path: "/device/{device}/power",
    call: (api, a) => api.post(`/device/${a.device}/power`, { on: a.on }),
  },
  {
    id: "inject",
    label: "Inject alarm",
    method: "POST",
    path: "/alarms/inject",
    call: (api, a) =>
      api.post("/alarms/inject", {
        source: a.source,
        severity: a.severity,
        text: a.text,
      }),
  },
  {
    id: "override",
    label: "Set HMI override",
    method: "POST",
    path: "/hmi/override",
    call: (api, a) =>
      api.post("/hmi/override", { field: a.field, value: a.value }),
  },
  {
    id: "clear_override",
    label: "Clear HMI override",
    method: "DELETE",
    path: "/hmi/override/{field}",
    call: (api, a) => api.delete(`/hmi/override/${a.field}`),
  },
  {
    id: "weave",
    label: "Weave aspect",
    method: "POST",
    path: "/aspects",
    call: (api, a) =>
      api.post("/aspects", {
        id: a.id,
        pointcut: a.pointcut,
        advices: a.advices,
      }),
  },
  {
    id: "unweave",
    label: "Unweave aspect",
    method: "DELETE",
    path: "/aspects/{id}",
    call: (api, a) => api.delete(`/aspects/${a.id}`),
  },
];

export function actionFor(id: string): UiAction {
  const action = UI_ACTIONS.find((a) => a.id === id);
  if (!action) throw new Error(`no UI action ${id}`);
  return action;
}
