# Copyright hweno-solver contributors. All Rights Reserved.

import pytest


@pytest.fixture(autouse=True)
def log_dir(tmp_path_factory, monkeypatch) -> str:
    """Keeps the command line log file out of the home directory."""
    path = str(tmp_path_factory.getbasetemp() / "logs")
    monkeypatch.setenv("HWENO_LOG_DIR", path)
    return path
