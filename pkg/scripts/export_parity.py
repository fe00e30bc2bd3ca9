#!/usr/bin/env python3
"""Export the mutating-endpoint parity table for the browser console."""

import json
from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ctxbridge.server import MUTATING_ENDPOINTS  # noqa: E402

table = [{"method": m, "path": p, "subject": s, "verb": v}
         for m, p, s, v in MUTATING_ENDPOINTS]
body = json.dumps(table, indent=2)

out = Path(__file__).resolve().parents[1] / "frontend" / "src" / "parity.ts"
out.parent.mkdir(parents=True, exist_ok=True)
out.write_text(
    "// Generated by scripts/export_parity.py; do not edit by hand.\n"
    "export interface ParityEntry {\n"
    "  method: string;\n"
    "  path: string;\n"
    "  subject: string;\n"
    "  verb: string;\n"
    "}\n\n"
    f"export const MUTATING_ENDPOINTS: ParityEntry[] = {body};\n",
    encoding="utf-8",
)
print(f"wrote {out} ({len(table)} endpoints)")
