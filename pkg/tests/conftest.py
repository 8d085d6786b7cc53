import os
import sys
from pathlib import Path

import pytest

ROOT_DIR = Path(__file__).resolve().parent.parent
SRC_DIR = ROOT_DIR / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))


def pytest_collection_modifyitems(config, items):
    """Skip long simulation runs unless COMPACTLAB_RUN_SLOW is set.

    The phenomenology checks integrate K(2,2) for tens of time units on fine grids
    and take minutes; they are opt-in:
      export COMPACTLAB_RUN_SLOW=1
    """
    if os.getenv("COMPACTLAB_RUN_SLOW", "").strip().lower() in {"1", "true", "yes", "on"}:
        return
    skip_slow = pytest.mark.skip(reason="set COMPACTLAB_RUN_SLOW=1 to run slow simulations")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
