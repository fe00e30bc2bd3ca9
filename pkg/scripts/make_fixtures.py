#!/usr/bin/env python3
"""Regenerate fixtures/registry/*.tsv from the built-in seed data."""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from ctxbridge.fixtures import builtin_registry  # noqa: E402

out = Path(__file__).resolve().parents[1] / "fixtures" / "registry"
builtin_registry().save_tables(out)
print(f"wrote tables to {out}")
