"""Shared fixtures: cached enumerations, snapshot files, fixture data.

Enumerating transfer systems on the order-12 groups takes tens of
seconds, so the results are cached for the whole session and shared
between the regular tests and the acceptance suite.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from transferkit import builtin_lattice
from transferkit.transfer_systems import enumerate_transfer_systems

DATA_DIR = Path(__file__).parent / "data"
SNAPSHOT_DIR = Path(__file__).parent / "snapshots"

_SYSTEMS_CACHE: dict[str, list] = {}


@pytest.fixture(scope="session")
def enumerated():
    """``enumerated(spec)``: all transfer systems of a builtin group, cached."""

    def get(spec: str):
        if spec not in _SYSTEMS_CACHE:
            _SYSTEMS_CACHE[spec] = enumerate_transfer_systems(
                builtin_lattice(spec)
            )
        return _SYSTEMS_CACHE[spec]

    return get


@pytest.fixture(scope="session")
def snapshot():
    """``snapshot(name)``: parsed snapshot JSON; ``snapshot(name, value)``:
    compare against the stored value, recording it on first ever run."""

    def check(name: str, computed=None):
        path = SNAPSHOT_DIR / name
        if computed is None:
            return json.loads(path.read_text())
        if not path.exists():
            path.write_text(
                json.dumps(computed, indent=2, sort_keys=True) + "\n"
            )
            return computed
        stored = json.loads(path.read_text())
        assert computed == stored, (
            f"{name}: computed value drifted from the recorded snapshot"
        )
        return stored

    return check


@pytest.fixture(scope="session")
def data_text():
    """``data_text(name)``: the contents of a file under tests/data."""

    def read(name: str) -> str:
        return (DATA_DIR / name).read_text()

    return read
