import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent


def pytest_configure() -> None:
    # Ensure `src/` is on sys.path for tests without installation.
    src_dir = (ROOT / "src").resolve()
    if str(src_dir) not in sys.path:
        sys.path.insert(0, str(src_dir))


@pytest.fixture
def fixtures_dir() -> Path:
    """Golden outputs and sample settings under tests/fixtures."""
    return ROOT / "tests" / "fixtures"
