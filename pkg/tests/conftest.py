"""Shared test configuration: make the src layout importable without an
install, and provide small helpers for table fixtures."""

import sys
from pathlib import Path

import numpy as np
import pytest

_SRC = Path(__file__).resolve().parents[1] / "src"
if str(_SRC) not in sys.path:
    try:
        import mipool  # noqa: F401
    except ImportError:
        sys.path.insert(0, str(_SRC))


@pytest.fixture
def rng():
    return np.random.default_rng(202408)


@pytest.fixture
def write_csv(tmp_path):
    """Write rows (list of dicts or text) to a temp CSV and return its path."""

    def _write(name, header, rows):
        path = tmp_path / name
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(str(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)

    return _write
