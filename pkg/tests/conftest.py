import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orthologic import catalog  # noqa: E402


@pytest.fixture(scope="session")
def cat8():
    return catalog.enumerate(8)


@pytest.fixture(scope="session")
def cat10():
    return catalog.enumerate(10)
