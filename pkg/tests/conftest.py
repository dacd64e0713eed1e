import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from coeffs import ingest  # noqa: E402
from qform import HalfIntegralForm  # noqa: E402
from twist import TwistContext  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: długie przeglądy (p = 5, pełne zestawy form)")


@pytest.fixture
def upsilon20():
    """Tablica a(S) dla Upsilon20 z kluczami potrzebnymi w przykładzie p=3."""
    return ingest(ROOT / "data" / "upsilon20_p3.txt")


@pytest.fixture
def worked_form():
    return HalfIntegralForm(81, 44, 6)


@pytest.fixture
def ctx_p3_k20():
    return TwistContext(level=1, weight=20, p=3)
