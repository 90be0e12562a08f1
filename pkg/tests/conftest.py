from pathlib import Path

import pytest

from cfx.cli import run

FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def cli(capsys, monkeypatch, tmp_path):
    """Run the command line in-process; returns (exit status, stdout, stderr)."""
    for key in ("CFX_FUEL", "CFX_LOG_LEVEL", "CFX_ENUM_MAX_LEN", "CFX_ALPHABET"):
        monkeypatch.delenv(key, raising=False)
    missing_env = str(tmp_path / "missing.env")

    def invoke(*argv: str):
        code = run(["--env", missing_env, *argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke
