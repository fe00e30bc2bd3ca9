// Generated by scripts/export_parity.py; do not edit by hand.
export interface ParityEntry {
  method: string;
  path: string;
  subject: string;
  verb: string;
}

export const MUTATING_ENDPOINTS: ParityEntry[] = [
  {
    "method": "POST",
    "path": "/identify",
    "subject": "user",
    "verb": "identify"
  },
  {
    "method": "POST",
    "path": "/services/query",
    "subject": "user",
    "verb": "request"
  },
  {
    "method": "POST",
    "path": "/user/move",
    "subject": "user",
    "verb": "move"
  },
  {
    "method": "POST",
    "path": "/user/select",
    "subject": "user",
    "verb": "select"
  },
  {
    "method": "POST",
    "path": "/device/{device}/power",
    "subject": "device",
    "verb": "power"
  },
  {
    "method": "POST",
    "path": "/alarms/inject",
    "subject": "alarm",
    "verb": "inject"
  },
  {
    "method": "POST",
    "path": "/hmi/override",
    "subject": "user",
    "verb": "override"
  },
  {
    "method": "DELETE",
    "path": "/hmi/override/{field}",
    "subject": "user",
    "verb": "clear_override"
  },
  {
    "method": "POST",
    "path": "/aspects",
    "subject": "aspect",
    "verb": "weave"
  },
  {
    "method": "DELETE",
    "path": "/aspects/{id}",
    "subject": "aspect",
    "verb": "unweave"
  }
];
