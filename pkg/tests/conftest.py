from __future__ import annotations

from pathlib import Path

import pytest

from citegraph.scholar import ClientConfig, ScholarClient

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def replay_config(fixtures_dir) -> ClientConfig:
    return ClientConfig(mode="replay", fixtures_dir=fixtures_dir)


@pytest.fixture
def replay_client(replay_config) -> ScholarClient:
    return ScholarClient(replay_config)
