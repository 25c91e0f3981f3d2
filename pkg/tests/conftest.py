import pathlib

import pytest

from toricq.config import load_config

CONFIG_DIR = pathlib.Path(__file__).resolve().parents[1] \
    / "src" / "toricq" / "configs"


def config_path(name: str) -> str:
    return str(CONFIG_DIR / name)


@pytest.fixture(scope="session")
def cubic():
    return load_config(config_path("p1112_cubic.json"))


@pytest.fixture(scope="session")
def quintic():
    return load_config(config_path("quintic.json"))
