import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))

from sumprod.config import set_config  # noqa: E402
from sumprod.fpcore import SetFp, make_field  # noqa: E402

ENV_KEYS = (
    "SUMPROD_THREADS",
    "SUMPROD_NTT_THRESHOLD",
    "SUMPROD_LOG_LEVEL",
    "SUMPROD_K_CAP",
    "SUMPROD_DTIMES_CAP",
    "SUMPROD_TUPLE_GUARD",
    "SUMPROD_OUT_DIR",
)


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)
    set_config(None)
    yield
    set_config(None)


@pytest.fixture
def f5():
    return make_field(5)


@pytest.fixture
def f7():
    return make_field(7)


@pytest.fixture
def f13():
    return make_field(13)


@pytest.fixture
def f101():
    return make_field(101)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240517))


@pytest.fixture
def make_set():
    def _make(ctx, values):
        return SetFp.of(ctx, values)

    return _make
