import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

WORKBOOKS = Path(__file__).parent.parent / "workbooks"


@pytest.fixture
def workbooks_dir() -> Path:
    return WORKBOOKS
