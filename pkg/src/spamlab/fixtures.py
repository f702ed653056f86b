"""Bundled data files (the ten sample subject lines, demo rules and models)."""

from __future__ import annotations

from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"


def fixture_path(name: str) -> Path:
    return DATA_DIR / name


def fixture_text(name: str) -> str:
    return fixture_path(name).read_text(encoding="utf-8")
