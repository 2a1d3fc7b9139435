"""Shipped example models."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def openclaw_path() -> Path:
    """Filesystem path of the shipped OpenClaw case-study model."""
    return Path(str(resources.files(__name__).joinpath("openclaw.matra.json")))


def openclaw_bytes() -> bytes:
    return resources.files(__name__).joinpath("openclaw.matra.json").read_bytes()
