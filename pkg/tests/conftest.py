import sys
from functools import lru_cache
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
DATA = ROOT / "data"

from artinian.io import load_ring, parse_ring_text  # noqa: E402

RING_FILES = sorted(p.stem for p in DATA.glob("*.ring"))


@lru_cache(maxsize=None)
def ring(name):
    return load_ring(DATA / f"{name}.ring")


@lru_cache(maxsize=None)
def ring_text(text, name=None):
    return parse_ring_text(text, name=name)


@lru_cache(maxsize=None)
def z4():
    return parse_ring_text("zmod 2 2\nrelations\n", name="Z4")


@pytest.fixture(params=RING_FILES)
def fixture_ring(request):
    return ring(request.param)
