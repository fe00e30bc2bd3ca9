// Shapes of the server's JSON payloads (snake_case mirrors the wire).

export interface Widget {
  kind: string; // prompt | list | text | button
  text: string;
  service_id: string | null;
}

export interface Descriptor {
  theme_color: string;
  vocal: boolean;
  display_mode: string;
  title: string;
  greeting: string;
  widgets: Widget[];
}

export interface ServiceRow {
  id_service: string;
  service_name: string;
  category: string;
  distance_km: number;
  lon: number;
  lat: number;
}

export interface DeviceStates {
  pda_on: boolean;
  tv_on: boolean;
}

export interface StateSnapshot {
  tick: number;
  current_user: string | null;
  devices: DeviceStates;
  queue_depth: number;
  descriptor: Descriptor | null;
  services: ServiceRow[];
  woven_aspects: string[];
  adaptation_rules: { rule_id: string; field: string }[];
  assembly: string;
  alarm_log_depth: number;
}

export interface LogEvent {
  tick: number;
  seq: number;
  kind: string;
  data: Record<string, unknown>;
}

export interface RouteInfo {
  alarm_id: string;
  route: string;
  path: string[];
}
