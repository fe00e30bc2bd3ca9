#!/usr/bin/env python3
"""Write a deterministic alarm soak scenario (seeded random schedule)."""

import argparse
from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ctxbridge.scenario import generate_alarm_soak  # noqa: E402

parser = argparse.ArgumentParser()
parser.add_argument("--seed", type=int, default=2024)
parser.add_argument("--count", type=int, default=200)
parser.add_argument("--out", default="scenarios/alarm_soak.scn")
args = parser.parse_args()

Path(args.out).write_text(generate_alarm_soak(args.seed, args.count),
                          encoding="utf-8")
print(f"wrote {args.out} (seed={args.seed}, count={args.count})")
