from __future__ import annotations

import pytest

from shtuka_degrees.verify import load_workspace


@pytest.fixture(scope="session")
def f5():
    return load_workspace("builtin:f5")


@pytest.fixture(scope="session")
def genus2():
    return load_workspace("builtin:genus2")


@pytest.fixture(scope="session")
def model_workspaces():
    return [load_workspace(f"builtin:{name}") for name in ("f5", "f3", "f7", "f11", "f5b")]
