import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from engine.arena import build_arena, load_arena  # noqa: E402

G3_PATH = ROOT / "data" / "fixtures" / "g3.arena"


@pytest.fixture
def g3_path() -> Path:
    return G3_PATH


@pytest.fixture
def g3_text() -> str:
    return G3_PATH.read_text(encoding="utf-8")


@pytest.fixture
def g3():
    """a=0 (Min), b=1 (Max), c=2 (Min); En = {a: 2, b: 5, c: 0}"""
    return load_arena(G3_PATH)


@pytest.fixture
def min_loop():
    return build_arena(["MIN"], [(0, 0, -1)])


@pytest.fixture
def max_loop():
    return build_arena(["MAX"], [(0, 0, 1)])


@pytest.fixture
def zero_cycle():
    return build_arena(["MIN", "MIN"], [(0, 1, 0), (1, 0, 0)])


@pytest.fixture
def write_arena(tmp_path):
    def write(text: str, name: str = "game.arena") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write
