"""Registry for the bundled network fixtures and cusp example files.

The HETEROSWITCH_FIXTURES environment variable overrides the bundled data
directory; fixture names resolve there first.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .network import HeteroclinicNetwork, load_network

__all__ = ["available_fixtures", "fixture_path", "load_fixture", "resolve_network"]

ENV_VAR = "HETEROSWITCH_FIXTURES"


def _data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("heteroswitch").joinpath("data")))


def available_fixtures() -> list:
    base = _data_dir()
    if not base.is_dir():
        return []
    return sorted(p.stem for p in base.glob("*.json"))


def fixture_path(name: str) -> Path:
    path = _data_dir() / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(
            f"unknown fixture {name!r}; available: {', '.join(available_fixtures())}"
        )
    return path


def load_fixture(name: str) -> HeteroclinicNetwork:
    return load_network(fixture_path(name))


def resolve_network(spec: str) -> HeteroclinicNetwork:
    """Resolve a CLI-style network argument: a file path, a fixture name, or
    a fixtures/<name> style reference."""
    p = Path(spec)
    if p.exists():
        return load_network(p)
    return load_fixture(p.stem)
